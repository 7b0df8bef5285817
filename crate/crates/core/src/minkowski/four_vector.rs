use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Contravariant components `(x⁰, x¹, x², x³)`.
///
/// For a space-time point `x⁰ = ct`; for a momentum `x⁰ = e/c`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FourVector {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl FourVector {
    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        FourVector { x0, x1, x2, x3 }
    }

    pub const fn from_parts(x0: f64, spatial: [f64; 3]) -> Self {
        FourVector {
            x0,
            x1: spatial[0],
            x2: spatial[1],
            x3: spatial[2],
        }
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.x0, self.x1, self.x2, self.x3]
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|x| x.is_finite())
    }

    /// Lowers the index with `metric`.
    pub fn lower(&self, metric: &Metric) -> [f64; 4] {
        let x = self.to_array();
        [
            metric.diag[0] * x[0],
            metric.diag[1] * x[1],
            metric.diag[2] * x[2],
            metric.diag[3] * x[3],
        ]
    }
}

impl Add for FourVector {
    type Output = FourVector;
    fn add(self, o: FourVector) -> FourVector {
        FourVector::new(
            self.x0 + o.x0,
            self.x1 + o.x1,
            self.x2 + o.x2,
            self.x3 + o.x3,
        )
    }
}

impl Sub for FourVector {
    type Output = FourVector;
    fn sub(self, o: FourVector) -> FourVector {
        FourVector::new(
            self.x0 - o.x0,
            self.x1 - o.x1,
            self.x2 - o.x2,
            self.x3 - o.x3,
        )
    }
}

impl Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector::new(-self.x0, -self.x1, -self.x2, -self.x3)
    }
}

impl Mul<FourVector> for f64 {
    type Output = FourVector;
    fn mul(self, v: FourVector) -> FourVector {
        FourVector::new(self * v.x0, self * v.x1, self * v.x2, self * v.x3)
    }
}

/// A diagonal metric. The library always uses [`Metric::MINKOWSKI`]; other
/// values exist so that checks can be exercised against a wrong metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub diag: [f64; 4],
}

impl Metric {
    /// `η = diag(-1, +1, +1, +1)`.
    pub const MINKOWSKI: Metric = Metric {
        diag: [-1.0, 1.0, 1.0, 1.0],
    };

    pub fn dot(&self, a: &FourVector, b: &FourVector) -> f64 {
        let (a, b) = (a.to_array(), b.to_array());
        (0..4).map(|i| self.diag[i] * a[i] * b[i]).sum()
    }
}

impl Default for Metric {
    fn default() -> Self {
        Metric::MINKOWSKI
    }
}

/// `η_{αβ} a^α b^β` with `η = diag(-1, +1, +1, +1)`.
pub fn minkowski_dot(a: &FourVector, b: &FourVector) -> f64 {
    Metric::MINKOWSKI.dot(a, b)
}
