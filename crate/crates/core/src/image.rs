//! Minimal RGB raster and plain-text PPM (P3) emission.

use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rgb(pub u8, pub u8, pub u8);

impl Rgb {
    pub const WHITE: Rgb = Rgb(255, 255, 255);
    pub const BLACK: Rgb = Rgb(0, 0, 0);
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    width: usize,
    height: usize,
    pixels: Vec<Rgb>,
}

impl Image {
    pub fn new(width: usize, height: usize, fill: Rgb) -> Self {
        Self {
            width,
            height,
            pixels: vec![fill; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> Rgb {
        self.pixels[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, c: Rgb) {
        self.pixels[y * self.width + x] = c;
    }

    pub fn pixels(&self) -> &[Rgb] {
        &self.pixels
    }

    /// Number of pixels equal to `c`.
    pub fn count(&self, c: Rgb) -> usize {
        self.pixels.iter().filter(|&&p| p == c).count()
    }

    /// Plain PPM text. Pixels are written five per line.
    pub fn to_ppm(&self) -> String {
        let mut s = String::with_capacity(self.pixels.len() * 12 + 32);
        let _ = write!(s, "P3\n{} {}\n255\n", self.width, self.height);
        for row in self.pixels.chunks(5) {
            let line: Vec<String> = row.iter().map(|p| format!("{} {} {}", p.0, p.1, p.2)).collect();
            s.push_str(&line.join("  "));
            s.push('\n');
        }
        s
    }
}

/// Eight-colour palette; index 0 is the white background.
pub const STATE_PALETTE: [Rgb; 8] = [
    Rgb(255, 255, 255),
    Rgb(31, 119, 180),
    Rgb(255, 127, 14),
    Rgb(44, 160, 44),
    Rgb(214, 39, 40),
    Rgb(148, 103, 189),
    Rgb(140, 86, 75),
    Rgb(23, 23, 23),
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ppm_header_and_pixel_count() {
        let mut img = Image::new(3, 2, Rgb::WHITE);
        img.set(2, 1, Rgb(1, 2, 3));
        let text = img.to_ppm();
        let toks: Vec<&str> = text.split_whitespace().collect();
        assert_eq!(&toks[..4], &["P3", "3", "2", "255"]);
        assert_eq!(toks.len() - 4, 18);
        assert_eq!(&toks[toks.len() - 3..], &["1", "2", "3"]);
    }

    #[test]
    fn palette_is_distinct() {
        for (i, a) in STATE_PALETTE.iter().enumerate() {
            for b in &STATE_PALETTE[i + 1..] {
                assert_ne!(a, b);
            }
        }
    }
}
