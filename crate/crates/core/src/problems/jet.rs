//! Truncated bivariate Taylor series in `(x, t)`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

/// Taylor coefficients `∂ₓᵃ∂ₜᵇf/(a!b!)` for `a + b ≤ order`.
///
/// Index of `(a, b)` is `d(d+1)/2 + b` with `d = a + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    order: u32,
    c: Vec<f64>,
}

fn idx(a: u32, b: u32) -> usize {
    let d = (a + b) as usize;
    d * (d + 1) / 2 + b as usize
}

fn size(order: u32) -> usize {
    idx(0, order) + 1
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

impl Jet {
    pub fn constant(order: u32, v: f64) -> Jet {
        let mut c = vec![0.0; size(order)];
        c[0] = v;
        Jet { order, c }
    }

    /// The coordinate `x` at `x0`.
    pub fn x(order: u32, x0: f64) -> Jet {
        let mut j = Jet::constant(order, x0);
        if order > 0 {
            j.c[idx(1, 0)] = 1.0;
        }
        j
    }

    /// The coordinate `t` at `t0`.
    pub fn t(order: u32, t0: f64) -> Jet {
        let mut j = Jet::constant(order, t0);
        if order > 0 {
            j.c[idx(0, 1)] = 1.0;
        }
        j
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// `∂ₓᵃ∂ₜᵇ` at the expansion point; zero beyond the order.
    pub fn derivative(&self, a: u32, b: u32) -> f64 {
        if a + b > self.order {
            return 0.0;
        }
        self.c[idx(a, b)] * factorial(a) * factorial(b)
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|v| v.is_finite())
    }

    pub fn scale(&self, k: f64) -> Jet {
        Jet {
            order: self.order,
            c: self.c.iter().map(|v| v * k).collect(),
        }
    }

    pub fn add_const(&self, k: f64) -> Jet {
        let mut out = self.clone();
        out.c[0] += k;
        out
    }

    /// `Σ_k coeffs[k]·n^k` where `n` is `self` without its constant term.
    fn nilpotent_series(&self, coeffs: &[f64]) -> Jet {
        let mut n = self.clone();
        n.c[0] = 0.0;
        let mut out = Jet::constant(self.order, coeffs[0]);
        let mut power = Jet::constant(self.order, 1.0);
        for &ck in &coeffs[1..] {
            power = &power * &n;
            out = &out + &power.scale(ck);
        }
        out
    }

    pub fn exp(&self) -> Jet {
        let e0 = libm::exp(self.c[0]);
        let coeffs: Vec<f64> = (0..=self.order).map(|k| e0 / factorial(k)).collect();
        self.nilpotent_series(&coeffs)
    }

    /// `1/self`; the constant term must be nonzero.
    pub fn recip(&self) -> Jet {
        let inv = 1.0 / self.c[0];
        let mut coeffs = Vec::with_capacity(self.order as usize + 1);
        let mut term = inv;
        for _ in 0..=self.order {
            coeffs.push(term);
            term *= -inv;
        }
        self.nilpotent_series(&coeffs)
    }

    /// `√self`; the constant term must be positive.
    pub fn sqrt(&self) -> Jet {
        let s0 = libm::sqrt(self.c[0]);
        let inv = 1.0 / self.c[0];
        let mut coeffs = Vec::with_capacity(self.order as usize + 1);
        let mut binom = 1.0;
        let mut pow = s0;
        for k in 0..=self.order {
            coeffs.push(binom * pow);
            binom *= (0.5 - f64::from(k)) / f64::from(k + 1);
            pow *= inv;
        }
        self.nilpotent_series(&coeffs)
    }

    pub fn sin(&self) -> Jet {
        self.trig(0)
    }

    pub fn cos(&self) -> Jet {
        self.trig(1)
    }

    /// `k`-th derivative of sin at `c0` is `sin(c0 + (k + phase)π/2)`.
    fn trig(&self, phase: u32) -> Jet {
        let c0 = self.c[0];
        let coeffs: Vec<f64> = (0..=self.order)
            .map(|k| libm::sin(c0 + f64::from(k + phase) * core::f64::consts::FRAC_PI_2) / factorial(k))
            .collect();
        self.nilpotent_series(&coeffs)
    }

    /// Derivative along `x` (order drops by one).
    pub fn dx(&self) -> Jet {
        self.differentiate(true)
    }

    /// Derivative along `t` (order drops by one).
    pub fn dt(&self) -> Jet {
        self.differentiate(false)
    }

    fn differentiate(&self, along_x: bool) -> Jet {
        let order = self.order.saturating_sub(1);
        let mut out = Jet::constant(order, 0.0);
        if self.order == 0 {
            return out;
        }
        for d in 0..=order {
            for b in 0..=d {
                let a = d - b;
                out.c[idx(a, b)] = if along_x {
                    f64::from(a + 1) * self.c[idx(a + 1, b)]
                } else {
                    f64::from(b + 1) * self.c[idx(a, b + 1)]
                };
            }
        }
        out
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let n = size(order);
        Jet {
            order,
            c: (0..n).map(|i| self.c[i] + rhs.c[i]).collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self + &(-rhs)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut c = vec![0.0; size(order)];
        for d1 in 0..=order {
            for b1 in 0..=d1 {
                let l = self.c[idx(d1 - b1, b1)];
                if l == 0.0 {
                    continue;
                }
                for d2 in 0..=(order - d1) {
                    for b2 in 0..=d2 {
                        let a = d1 - b1 + d2 - b2;
                        c[idx(a, b1 + b2)] += l * rhs.c[idx(d2 - b2, b2)];
                    }
                }
            }
        }
        Jet { order, c }
    }
}
