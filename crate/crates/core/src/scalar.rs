//! Scalar abstraction shared by the real-valued modules.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar used for coordinates, weights and competition scores.
pub trait Real: Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Lossy conversion from `f64`; every `Real` can represent the finite `f64`
    /// values this crate produces, modulo rounding.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 converts to Real")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("Real converts to f64")
    }
}

impl<T> Real for T where T: Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static {}
