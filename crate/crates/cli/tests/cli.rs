use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use richspaces::ca1d::ApoptoticRule;
use richspaces::fashionca::CompetitionMatrix;
use richspaces::seed;

const BIN: &str = env!("CARGO_BIN_EXE_richspaces");

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .current_dir(dir)
        .env_remove("RICHSPACES_SEED")
        .output()
        .unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = run(dir, args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Minimal plain-PPM reader: magic, size, maxval and exactly w*h triples.
fn read_ppm(path: &Path) -> (usize, usize, Vec<(u8, u8, u8)>) {
    let text = fs::read_to_string(path).unwrap();
    let mut toks = text.split_whitespace();
    assert_eq!(toks.next(), Some("P3"));
    let w: usize = toks.next().unwrap().parse().unwrap();
    let h: usize = toks.next().unwrap().parse().unwrap();
    assert_eq!(toks.next(), Some("255"));
    let vals: Vec<u8> = toks.map(|t| t.parse().unwrap()).collect();
    assert_eq!(vals.len(), w * h * 3);
    (w, h, vals.chunks(3).map(|c| (c[0], c[1], c[2])).collect())
}

#[test]
fn voronoi_center_counts_and_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(dir.path(), &["voronoi", "--grid", "9", "--size", "201x201"]);
    assert!(out.starts_with("centers 81 "), "{out}");
    assert!(out.contains("connected true"));
    let (w, h, _) = read_ppm(&dir.path().join("voronoi.ppm"));
    assert_eq!((w, h), (201, 201));
    let net = fs::read_to_string(dir.path().join("voronoi.network.txt")).unwrap();
    assert!(net.starts_with("richspaces-network v1\n201 201\n"));
    let out = ok(dir.path(), &["voronoi", "--grid", "9", "--extra", "19", "--out", "x"]);
    assert!(out.starts_with("centers 100 "), "{out}");
}

#[test]
fn voronoi_random_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["voronoi", "--random", "100", "--size", "201x201", "--seed", "1"];
    ok(dir.path(), &[&args[..], &["--out", "a"]].concat());
    ok(dir.path(), &[&args[..], &["--out", "b"]].concat());
    for ext in [".ppm", ".network.txt"] {
        assert_eq!(
            fs::read(dir.path().join(format!("a{ext}"))).unwrap(),
            fs::read(dir.path().join(format!("b{ext}"))).unwrap()
        );
    }
}

#[test]
fn env_seed_matches_flag() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        dir.path(),
        &[
            "voronoi", "--random", "30", "--size", "60x60", "--seed", "77", "--out", "flag",
        ],
    );
    let out = Command::new(BIN)
        .args(["voronoi", "--random", "30", "--size", "60x60", "--out", "env"])
        .current_dir(dir.path())
        .env("RICHSPACES_SEED", "77")
        .output()
        .unwrap();
    assert!(out.status.success());
    ok(
        dir.path(),
        &["voronoi", "--random", "30", "--size", "60x60", "--out", "default"],
    );
    let read = |s: &str| fs::read(dir.path().join(format!("{s}.network.txt"))).unwrap();
    assert_eq!(read("flag"), read("env"));
    assert_ne!(read("flag"), read("default"));
}

#[test]
fn zero_rule_renders_one_live_pixel() {
    let dir = tempfile::tempdir().unwrap();
    let zeros = vec!["0"; 36].join(" ");
    let out = ok(dir.path(), &["apoptotic", "render", "--rule", &zeros, "--out", "z.ppm"]);
    assert_eq!(out.trim(), "fitness 1");
    let (w, h, px) = read_ppm(&dir.path().join("z.ppm"));
    assert_eq!((w, h), (201, 201));
    let live: Vec<usize> = (0..px.len()).filter(|&i| px[i] != (255, 255, 255)).collect();
    assert_eq!(live, vec![100]);
}

#[test]
fn apoptotic_evolve_writes_rule_image_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        dir.path(),
        &[
            "apoptotic",
            "evolve",
            "--arena",
            "51x41",
            "--generations",
            "10",
            "--population",
            "20",
        ],
    );
    let rule: ApoptoticRule = fs::read_to_string(dir.path().join("apoptotic.rule.txt"))
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(rule.entries()[0], 0);
    assert_eq!(read_ppm(&dir.path().join("apoptotic.ppm")).0, 51);
    let trace = fs::read_to_string(dir.path().join("apoptotic.trace.csv")).unwrap();
    assert_eq!(trace.lines().next(), Some("generation,best,mean"));
    assert_eq!(trace.lines().count(), 11);
}

#[test]
fn transect_report_has_nonnegative_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(
        dir.path(),
        &[
            "apoptotic",
            "transect",
            "--arena",
            "31x31",
            "--generations",
            "10",
            "--population",
            "20",
            "--random",
            "50",
        ],
    );
    assert!(out.starts_with("richspaces-enrichment v1\n"));
    let ratio: f64 = out
        .lines()
        .find_map(|l| l.strip_prefix("ratio "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(ratio >= 0.0);
}

#[test]
fn sp_accepts_zero_fitness_ancestor_and_leaves_it_alone() {
    let dir = tempfile::tempdir().unwrap();
    let mut e = [1u8; 36];
    e[0] = 0;
    let text = ApoptoticRule::new(e).unwrap().to_text();
    fs::write(dir.path().join("anc.txt"), &text).unwrap();
    ok(
        dir.path(),
        &[
            "sp",
            "--ancestor",
            "anc.txt",
            "--generations",
            "5",
            "--population",
            "10",
        ],
    );
    assert_eq!(fs::read_to_string(dir.path().join("anc.txt")).unwrap(), text);
    let (w, h, _) = read_ppm(&dir.path().join("sp.ppm"));
    assert_eq!((w, h), (401, 401));
}

#[test]
fn sp_without_ancestor_file_fails_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["sp", "--ancestor", "missing.txt"]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
}

#[test]
fn bad_arguments_exit_nonzero_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["voronoi", "--grid", "0"][..],
        &["voronoi", "--size", "10by10"],
        &["voronoi", "--random", "5", "--grid", "3"],
        &["apoptotic", "render", "--rule", "1 2 3"],
        &["nonsense"],
    ] {
        let out = run(dir.path(), args);
        assert!(!out.status.success(), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
    }
}

#[test]
fn dwp_budget_zero_gives_one_red_room() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["dwp", "--budget", "0"]);
    let layout = fs::read_to_string(dir.path().join("dungeon.layout.txt")).unwrap();
    assert!(layout.contains("\nrooms 1\n"));
    assert_eq!(layout.lines().filter(|l| l.starts_with("room ")).count(), 1);
    let (w, _, px) = read_ppm(&dir.path().join("dungeon.ppm"));
    let red: Vec<usize> = (0..px.len()).filter(|&i| px[i] == (220, 30, 30)).collect();
    assert!(!red.is_empty());
    // one solid rectangle
    let xs: Vec<usize> = red.iter().map(|i| i % w).collect();
    let ys: Vec<usize> = red.iter().map(|i| i / w).collect();
    let area = (xs.iter().max().unwrap() - xs.iter().min().unwrap() + 1)
        * (ys.iter().max().unwrap() - ys.iter().min().unwrap() + 1);
    assert_eq!(area, red.len());
}

#[test]
fn dwp_is_repeatable_and_reads_its_automaton() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["dwp", "--budget", "100", "--out", "a"]);
    ok(dir.path(), &["dwp", "--budget", "100", "--out", "b"]);
    ok(
        dir.path(),
        &["dwp", "--budget", "100", "--sda", "a.sda.txt", "--out", "c"],
    );
    let read = |s: &str| fs::read(dir.path().join(s)).unwrap();
    assert_eq!(read("a.layout.txt"), read("b.layout.txt"));
    assert_eq!(read("a.ppm"), read("b.ppm"));
    assert_eq!(read("a.layout.txt"), read("c.layout.txt"));
    let (_, _, px) = read_ppm(&dir.path().join("a.ppm"));
    assert!(px.contains(&(220, 30, 30)));
}

#[test]
fn morph_of_one_matrix_matches_plain_map() {
    let dir = tempfile::tempdir().unwrap();
    let m = CompetitionMatrix::<f64>::random(4, &mut seed::rng(3)).unwrap();
    fs::write(dir.path().join("m.txt"), m.to_text()).unwrap();
    ok(
        dir.path(),
        &[
            "fashion",
            "morph",
            "--a",
            "m.txt",
            "--b",
            "m.txt",
            "--size",
            "48x32",
            "--out",
            "morph.ppm",
        ],
    );
    ok(
        dir.path(),
        &[
            "fashion", "map", "--matrix", "m.txt", "--size", "48x32", "--out", "plain",
        ],
    );
    assert_eq!(
        fs::read(dir.path().join("morph.ppm")).unwrap(),
        fs::read(dir.path().join("plain.ppm")).unwrap()
    );
}

#[test]
fn map_with_zero_steps_is_thresholded_noise() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["fashion", "map", "--steps", "0", "--size", "40x30"]);
    let (w, h, px) = read_ppm(&dir.path().join("cavern.ppm"));
    assert_eq!((w, h), (40, 30));
    let colours: std::collections::HashSet<_> = px.iter().collect();
    assert_eq!(colours.len(), 2);
    let mask = fs::read_to_string(dir.path().join("cavern.mask.txt")).unwrap();
    assert!(mask.starts_with("richspaces-mask v1\n40 30\n"));
}

#[test]
fn coevolve_emits_matrices_and_report() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        dir.path(),
        &[
            "fashion",
            "coevolve",
            "--generations",
            "3",
            "--population",
            "14",
            "--size",
            "16x16",
        ],
    );
    for f in ["coevolve.a.txt", "coevolve.b.txt"] {
        let text = fs::read_to_string(dir.path().join(f)).unwrap();
        assert_eq!(CompetitionMatrix::<f64>::from_text(&text).unwrap().n_states(), 4);
    }
    let report = fs::read_to_string(dir.path().join("coevolve.report.txt")).unwrap();
    assert!(report.starts_with("richspaces-coevolve v1\nmin_fitness "));
    assert_eq!(report.lines().filter(|l| l.starts_with("t ")).count(), 11);
}

#[test]
fn domino_board_solves_to_six() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("d.txt"),
        "richspaces-puzzle v1\nboard 1 2\n2 3\nsymmetry fixed\npieces 1\npiece 0,0 0,1\n",
    )
    .unwrap();
    assert_eq!(ok(dir.path(), &["polyomino", "solve", "d.txt"]), "6\n");
}

#[test]
fn constructed_and_neutral_puzzles_solve_to_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(
        dir.path(),
        &[
            "polyomino",
            "construct",
            "--rows",
            "3",
            "--cols",
            "3",
            "--pieces",
            "3",
            "--free",
        ],
    );
    let score = out.trim().strip_prefix("score ").unwrap().to_string();
    assert_eq!(ok(dir.path(), &["polyomino", "solve", "puzzle.txt"]).trim(), score);
    let listing = ok(dir.path(), &["polyomino", "neutral", "puzzle.txt", "--count", "5"]);
    assert_eq!(listing.lines().count(), 5);
    for i in 1..=5 {
        let f = format!("neutral-{i}.txt");
        assert_eq!(ok(dir.path(), &["polyomino", "solve", &f]).trim(), score);
    }
}
