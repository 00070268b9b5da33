use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::One;

use crate::diffalg::{DiffPoly, Monomial, Rational, Sym};

/// A grid offset in half steps: `u(x + (p2/2)·h, t + (q2/2)·τ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Shift {
    pub p2: i32,
    pub q2: i32,
}

impl Shift {
    pub const fn new(p2: i32, q2: i32) -> Self {
        Shift { p2, q2 }
    }

    pub fn p(self) -> Rational {
        Rational::new(self.p2.into(), 2.into())
    }

    pub fn q(self) -> Rational {
        Rational::new(self.q2.into(), 2.into())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    inv_h: u32,
    inv_tau: u32,
    factors: Vec<(Shift, u32)>,
}

/// One term `coefficient · Π u(shift)^power / (h^inv_h · τ^inv_tau)`.
#[derive(Clone, Copy, Debug)]
pub struct StencilTerm<'a> {
    pub coefficient: &'a DiffPoly,
    pub inv_h: u32,
    pub inv_tau: u32,
    pub factors: &'a [(Shift, u32)],
}

/// A polynomial in shifted grid values with coefficients in `{x, t, ν, h, τ}`,
/// possibly divided by powers of `h` and `τ`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stencil {
    terms: BTreeMap<Key, DiffPoly>,
}

fn merge_factors(a: &[(Shift, u32)], b: &[(Shift, u32)]) -> Vec<(Shift, u32)> {
    let mut map: BTreeMap<Shift, u32> = a.iter().copied().collect();
    for &(s, e) in b {
        *map.entry(s).or_insert(0) += e;
    }
    map.into_iter().collect()
}

impl Stencil {
    pub fn zero() -> Self {
        Stencil::default()
    }

    pub fn constant(c: DiffPoly) -> Self {
        let mut s = Stencil::zero();
        s.add_term(Key { inv_h: 0, inv_tau: 0, factors: Vec::new() }, c);
        s
    }

    /// `u(x + (p2/2)·h, t + (q2/2)·τ)`.
    pub fn value(p2: i32, q2: i32) -> Self {
        let mut s = Stencil::zero();
        s.add_term(
            Key { inv_h: 0, inv_tau: 0, factors: alloc::vec![(Shift::new(p2, q2), 1)] },
            DiffPoly::one(),
        );
        s
    }

    fn add_term(&mut self, key: Key, c: DiffPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = StencilTerm<'_>> {
        self.terms.iter().map(|(k, c)| StencilTerm {
            coefficient: c,
            inv_h: k.inv_h,
            inv_tau: k.inv_tau,
            factors: &k.factors,
        })
    }

    /// True when some factor sits at a later time level than the base point.
    pub fn is_evolutionary(&self) -> bool {
        self.terms
            .keys()
            .any(|k| k.factors.iter().any(|(s, _)| s.q2 > 0))
    }

    pub fn scale(&self, c: &DiffPoly) -> Stencil {
        let mut out = Stencil::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn scale_rat(&self, c: Rational) -> Stencil {
        self.scale(&DiffPoly::constant(c))
    }

    /// Divides by `h^k`.
    pub fn div_h(&self, k: u32) -> Stencil {
        self.map_keys(|key| key.inv_h += k)
    }

    /// Divides by `τ^k`.
    pub fn div_tau(&self, k: u32) -> Stencil {
        self.map_keys(|key| key.inv_tau += k)
    }

    fn map_keys(&self, mut f: impl FnMut(&mut Key)) -> Stencil {
        let mut out = Stencil::zero();
        for (k, v) in &self.terms {
            let mut k = k.clone();
            f(&mut k);
            out.add_term(k, v.clone());
        }
        out
    }

    pub fn pow(&self, k: u32) -> Stencil {
        let mut acc = Stencil::constant(DiffPoly::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// The shift operator `E^{(p2/2, q2/2)}`: moves every sampled value and
    /// evaluates the coefficients at the shifted point.
    pub fn shift(&self, p2: i32, q2: i32) -> Stencil {
        let half = |n: i32| Rational::new(n.into(), 2.into());
        let dx = DiffPoly::var(Sym::X) + DiffPoly::var(Sym::H).scale(&half(p2));
        let dt = DiffPoly::var(Sym::T) + DiffPoly::var(Sym::Tau).scale(&half(q2));
        let mut out = Stencil::zero();
        for (k, v) in &self.terms {
            let factors = k
                .factors
                .iter()
                .map(|&(s, e)| (Shift::new(s.p2 + p2, s.q2 + q2), e))
                .collect();
            let coeff = v.substitute_with(|s| match s {
                Sym::X if p2 != 0 => Some(dx.clone()),
                Sym::T if q2 != 0 => Some(dt.clone()),
                _ => None,
            });
            out.add_term(Key { inv_h: k.inv_h, inv_tau: k.inv_tau, factors }, coeff);
        }
        out
    }

    /// Substitutes grid expressions for the jet coordinates of `p`; the
    /// remaining symbols become coefficients.
    pub fn from_poly(
        p: &DiffPoly,
        mut jet: impl FnMut(Sym) -> Option<Stencil>,
    ) -> Result<Stencil, Sym> {
        let mut cache: BTreeMap<Sym, Stencil> = BTreeMap::new();
        let mut out = Stencil::zero();
        for (m, c) in p.terms() {
            let mut coeff_pairs = Vec::new();
            let mut acc = Stencil::constant(DiffPoly::constant(c.clone()));
            for &(s, e) in m.factors() {
                if let Sym::U(..) = s {
                    if !cache.contains_key(&s) {
                        cache.insert(s, jet(s).ok_or(s)?);
                    }
                    acc = &acc * &cache[&s].pow(e);
                } else {
                    coeff_pairs.push((s, e));
                }
            }
            let coeff = DiffPoly::term(Rational::one(), Monomial::from_pairs(coeff_pairs));
            out = &out + &acc.scale(&coeff);
        }
        Ok(out)
    }

    /// Numeric value at `(x, t)` with sampled values from `u(x, t)`.
    pub fn evaluate(
        &self,
        x: f64,
        t: f64,
        h: f64,
        tau: f64,
        nu: f64,
        mut u: impl FnMut(f64, f64) -> f64,
    ) -> f64 {
        let mut samples: BTreeMap<Shift, f64> = BTreeMap::new();
        let mut sum = 0.0;
        for (k, c) in &self.terms {
            let cv = c.evaluate(|s| match s {
                Sym::X => x,
                Sym::T => t,
                Sym::Nu => nu,
                Sym::H => h,
                Sym::Tau => tau,
                Sym::U(..) => f64::NAN,
            });
            let mut v = cv / libm::pow(h, k.inv_h as f64) / libm::pow(tau, k.inv_tau as f64);
            for &(s, e) in &k.factors {
                let val = *samples
                    .entry(s)
                    .or_insert_with(|| u(x + 0.5 * s.p2 as f64 * h, t + 0.5 * s.q2 as f64 * tau));
                v *= libm::pow(val, e as f64);
            }
            sum += v;
        }
        sum
    }
}

impl Add<&Stencil> for &Stencil {
    type Output = Stencil;
    fn add(self, rhs: &Stencil) -> Stencil {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }
}

impl Add for Stencil {
    type Output = Stencil;
    fn add(self, rhs: Stencil) -> Stencil {
        &self + &rhs
    }
}

impl Sub<&Stencil> for &Stencil {
    type Output = Stencil;
    fn sub(self, rhs: &Stencil) -> Stencil {
        self + &(-rhs)
    }
}

impl Sub for Stencil {
    type Output = Stencil;
    fn sub(self, rhs: Stencil) -> Stencil {
        &self - &rhs
    }
}

impl Neg for &Stencil {
    type Output = Stencil;
    fn neg(self) -> Stencil {
        self.scale_rat(-Rational::one())
    }
}

impl Neg for Stencil {
    type Output = Stencil;
    fn neg(self) -> Stencil {
        -&self
    }
}

impl Mul<&Stencil> for &Stencil {
    type Output = Stencil;
    fn mul(self, rhs: &Stencil) -> Stencil {
        let mut out = Stencil::zero();
        for (ka, va) in &self.terms {
            for (kb, vb) in &rhs.terms {
                let key = Key {
                    inv_h: ka.inv_h + kb.inv_h,
                    inv_tau: ka.inv_tau + kb.inv_tau,
                    factors: merge_factors(&ka.factors, &kb.factors),
                };
                out.add_term(key, va * vb);
            }
        }
        out
    }
}

impl Mul for Stencil {
    type Output = Stencil;
    fn mul(self, rhs: Stencil) -> Stencil {
        &self * &rhs
    }
}

fn fmt_half(f: &mut fmt::Formatter<'_>, n: i32, unit: &str) -> fmt::Result {
    if n == 0 {
        return Ok(());
    }
    let sign = if n < 0 { '-' } else { '+' };
    let a = n.unsigned_abs();
    match (a % 2, a / 2) {
        (0, 1) => write!(f, "{sign}{unit}"),
        (0, k) => write!(f, "{sign}{k}*{unit}"),
        _ => write!(f, "{sign}{a}/2*{unit}"),
    }
}

impl fmt::Display for Shift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("u(x")?;
        fmt_half(f, self.p2, "h")?;
        f.write_str(", t")?;
        fmt_half(f, self.q2, "tau")?;
        f.write_str(")")
    }
}

impl fmt::Display for Stencil {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            for (s, e) in &k.factors {
                write!(f, "*{s}")?;
                if *e > 1 {
                    write!(f, "^{e}")?;
                }
            }
            match (k.inv_h, k.inv_tau) {
                (0, 0) => {}
                (i, 0) => write!(f, "/h^{i}")?,
                (0, j) => write!(f, "/tau^{j}")?,
                (i, j) => write!(f, "/(h^{i}*tau^{j})")?,
            }
        }
        Ok(())
    }
}

/// `δ = E^{1/2} − E^{−1/2}`.
pub fn delta(s: &Stencil) -> Stencil {
    &s.shift(1, 0) - &s.shift(-1, 0)
}

/// `μ = (E^{1/2} + E^{−1/2})/2`.
pub fn mu(s: &Stencil) -> Stencil {
    (&s.shift(1, 0) + &s.shift(-1, 0)).scale_rat(Rational::new(1.into(), 2.into()))
}

/// `δ⁺ = E − 1`.
pub fn delta_plus(s: &Stencil) -> Stencil {
    &s.shift(2, 0) - s
}

/// `δ⁻ = 1 − E^{−1}`.
pub fn delta_minus(s: &Stencil) -> Stencil {
    s - &s.shift(-2, 0)
}

/// `δ^k`.
pub fn delta_n(s: &Stencil, k: u32) -> Stencil {
    (0..k).fold(s.clone(), |acc, _| delta(&acc))
}
