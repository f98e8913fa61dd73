use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

/// Which recurrence produced a polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Q,
    L,
    T,
    H,
    SecondKind(usize),
    Dual,
    Operator,
    Other,
}

/// Dense real polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    pub coeffs: Vec<f64>,
    pub family: Family,
}

/// Neumaier-compensated sum.
pub(crate) fn compensated_sum(terms: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &x in terms {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

impl Poly {
    pub fn new(mut coeffs: Vec<f64>, family: Family) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Poly { coeffs, family }
    }

    pub fn zero(family: Family) -> Self {
        Poly { coeffs: Vec::new(), family }
    }

    pub fn constant(c: f64, family: Family) -> Self {
        Poly::new(vec![c], family)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| k as f64 * c).collect();
        Poly::new(coeffs, Family::Other)
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect(), self.family)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect(), Family::Other)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(Family::Other);
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out, Family::Other)
    }

    /// p(x^k).
    pub fn compose_power(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero(Family::Other);
        }
        let mut out = vec![0.0; (self.coeffs.len() - 1) * k + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i * k] = c;
        }
        Poly::new(out, Family::Other)
    }

    /// x^k p(x).
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut out = vec![0.0; k];
        out.extend_from_slice(&self.coeffs);
        Poly::new(out, self.family)
    }

    /// Largest absolute coefficient.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn with_family(mut self, family: Family) -> Poly {
        self.family = family;
        self
    }
}

/// ((a + b x) p + g q) / div, each coefficient a compensated sum of its three products.
pub(crate) fn linear_step(a: f64, b: f64, p: &Poly, g: f64, q: &Poly, div: f64, family: Family) -> Poly {
    let n = (p.coeffs.len() + 1).max(q.coeffs.len());
    let coeffs = (0..n)
        .map(|k| {
            let lower = if k >= 1 { p.coeff(k - 1) } else { 0.0 };
            compensated_sum(&[a * p.coeff(k), b * lower, g * q.coeff(k)]) / div
        })
        .collect();
    Poly::new(coeffs, family)
}

/// Vector of m polynomials (q_{0,r}, …, q_{m−1,r}).
#[derive(Debug, Clone, PartialEq)]
pub struct VectorPoly {
    pub r: isize,
    pub components: Vec<Poly>,
}

impl VectorPoly {
    pub fn eval_complex(&self, z: Complex64) -> Vec<Complex64> {
        self.components.iter().map(|p| p.eval_complex(z)).collect()
    }
}
