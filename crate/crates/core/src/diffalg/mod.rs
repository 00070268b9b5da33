//! Exact differential polynomials over `(x, t, ν, h, τ)` and the jet
//! coordinates `u_{(a,b)} = ∂^{a+b}u / ∂x^a ∂t^b`.
//!
//! A [`DiffPoly`] is a finite sum of monomials with [`BigRational`]
//! coefficients. The representation is canonical: zero coefficients are never
//! stored and monomials are kept in a fixed graded-lexicographic order, so two
//! polynomials are equal exactly when their term maps are identical. This is
//! what lets invariance residuals be tested for identical zero.

mod eliminate;
mod parse;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use eliminate::{eliminate_time, Eliminator};
pub use parse::ParseError;

/// Exact rational coefficient.
pub type Rational = BigRational;

/// Builds the rational `num/den`.
///
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// A base symbol or a derivative coordinate.
///
/// The derived ordering (`X < T < Nu < H < Tau < U(..)`, jets ordered by
/// `(a, b)`) is the fixed variable order used by canonical printing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    X,
    T,
    Nu,
    H,
    Tau,
    /// `U(a, b)` is `∂^{a+b}u/∂x^a∂t^b`; `U(0, 0)` is `u` itself.
    U(u32, u32),
}

impl Sym {
    pub const fn u() -> Self {
        Sym::U(0, 0)
    }

    /// Derivative order `a + b` of a jet coordinate, `None` for base symbols.
    pub fn jet_order(self) -> Option<u32> {
        match self {
            Sym::U(a, b) => Some(a + b),
            _ => None,
        }
    }

    pub fn is_time_derivative(self) -> bool {
        matches!(self, Sym::U(_, b) if b > 0)
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Sym::X => f.write_str("x"),
            Sym::T => f.write_str("t"),
            Sym::Nu => f.write_str("nu"),
            Sym::H => f.write_str("h"),
            Sym::Tau => f.write_str("tau"),
            Sym::U(0, 0) => f.write_str("u"),
            Sym::U(a, b) => {
                f.write_str("u_")?;
                for _ in 0..a {
                    f.write_str("x")?;
                }
                for _ in 0..b {
                    f.write_str("t")?;
                }
                Ok(())
            }
        }
    }
}

/// Direction of a total derivative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dir {
    X,
    T,
}

/// Power product of symbols, sorted by symbol with strictly positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(Sym, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(s: Sym) -> Self {
        Monomial(alloc::vec![(s, 1)])
    }

    /// Builds a monomial from arbitrary `(symbol, exponent)` pairs; repeated
    /// symbols are merged and zero exponents dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Sym, u32)>) -> Self {
        let mut map: BTreeMap<Sym, u32> = BTreeMap::new();
        for (s, e) in pairs {
            if e > 0 {
                *map.entry(s).or_insert(0) += e;
            }
        }
        Monomial(map.into_iter().collect())
    }

    pub fn factors(&self) -> &[(Sym, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, s: Sym) -> u32 {
        self.0
            .binary_search_by(|(t, _)| t.cmp(&s))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = self.0[i];
            let (b, eb) = other.0[j];
            match a.cmp(&b) {
                Ordering::Less => {
                    out.push((a, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Removes one power of `s`, returning the former exponent and the quotient.
    fn reduce(&self, s: Sym) -> Option<(u32, Monomial)> {
        let idx = self.0.binary_search_by(|(t, _)| t.cmp(&s)).ok()?;
        let e = self.0[idx].1;
        let mut rest = self.0.clone();
        if e == 1 {
            rest.remove(idx);
        } else {
            rest[idx].1 -= 1;
        }
        Some((e, Monomial(rest)))
    }

    /// Splits off every power of `s`: `(exponent, monomial without s)`.
    fn split(&self, s: Sym) -> (u32, Monomial) {
        match self.0.binary_search_by(|(t, _)| t.cmp(&s)) {
            Ok(idx) => {
                let mut rest = self.0.clone();
                let (_, e) = rest.remove(idx);
                (e, Monomial(rest))
            }
            Err(_) => (0, self.clone()),
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (s, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "{s}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Integer weights of `h` and `τ` used to measure the grid order of a monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridWeights {
    pub h: u32,
    pub tau: u32,
}

impl GridWeights {
    /// `h` has weight 1 and `τ` has weight `w_tau` (`w_tau = 2` when `τ ~ h²`).
    pub const fn tau_weight(w_tau: u32) -> Self {
        GridWeights { h: 1, tau: w_tau }
    }

    pub fn of(&self, m: &Monomial) -> u32 {
        m.exponent(Sym::H) * self.h + m.exponent(Sym::Tau) * self.tau
    }
}

/// A weighted `(h, τ)` truncation order: keep monomials whose weighted degree
/// is at most `max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridOrder {
    pub weights: GridWeights,
    pub max: u32,
}

impl GridOrder {
    /// The order written `O(τ^tau_order, h^h_order)`: a monomial `h^i τ^j` is
    /// kept iff `i/h_order + j/tau_order <= 1`.
    pub fn from_orders(tau_order: u32, h_order: u32) -> Self {
        assert!(tau_order > 0 && h_order > 0, "orders must be positive");
        let g = num_integer::gcd(tau_order, h_order);
        GridOrder {
            weights: GridWeights {
                h: tau_order / g,
                tau: h_order / g,
            },
            max: tau_order * h_order / g,
        }
    }

    pub const fn new(weights: GridWeights, max: u32) -> Self {
        GridOrder { weights, max }
    }

    /// Only the `h = τ = 0` part.
    pub const fn leading() -> Self {
        GridOrder {
            weights: GridWeights::tau_weight(1),
            max: 0,
        }
    }
}

/// Canonical differential polynomial with exact rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn one() -> Self {
        DiffPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = DiffPoly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn int(n: i64) -> Self {
        DiffPoly::constant(rat(n, 1))
    }

    pub fn var(s: Sym) -> Self {
        DiffPoly::term(rat(1, 1), Monomial::var(s))
    }

    /// Shorthand for the jet coordinate `u_{(a,b)}`.
    pub fn u(a: u32, b: u32) -> Self {
        DiffPoly::var(Sym::U(a, b))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut p = DiffPoly::zero();
        p.add_term(m, c);
        p
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

    /// Terms in canonical (ascending graded-lex) order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// The constant term, or `None` if `self` is not a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> DiffPoly {
        let mut acc = DiffPoly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Symbols occurring with a nonzero exponent in some term.
    pub fn symbols(&self) -> Vec<Sym> {
        let mut out: Vec<Sym> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|&(s, _)| s))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn contains(&self, s: Sym) -> bool {
        self.terms.keys().any(|m| m.exponent(s) > 0)
    }

    /// Highest derivative order `a + b` of any jet coordinate present.
    pub fn max_jet_order(&self) -> u32 {
        self.symbols()
            .into_iter()
            .filter_map(Sym::jet_order)
            .max()
            .unwrap_or(0)
    }

    pub fn has_time_derivatives(&self) -> bool {
        self.symbols().into_iter().any(Sym::is_time_derivative)
    }

    /// Formal partial derivative treating every [`Sym`] as independent.
    pub fn partial(&self, s: Sym) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.reduce(s) {
                out.add_term(rest, c * rat(e as i64, 1));
            }
        }
        out
    }

    /// Total derivative `D_x = ∂_x + Σ u_{(a+1,b)} ∂/∂u_{(a,b)}` or its `t`
    /// analogue. `ν`, `h` and `τ` are constants.
    pub fn total_derivative(&self, dir: Dir) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            for &(s, e) in &m.0 {
                let ds = match (s, dir) {
                    (Sym::X, Dir::X) | (Sym::T, Dir::T) => Monomial::one(),
                    (Sym::U(a, b), Dir::X) => Monomial::var(Sym::U(a + 1, b)),
                    (Sym::U(a, b), Dir::T) => Monomial::var(Sym::U(a, b + 1)),
                    _ => continue,
                };
                let (_, rest) = m.reduce(s).expect("symbol present in its own monomial");
                out.add_term(rest.mul(&ds), c * rat(e as i64, 1));
            }
        }
        out
    }

    pub fn dx(&self) -> DiffPoly {
        self.total_derivative(Dir::X)
    }

    pub fn dt(&self) -> DiffPoly {
        self.total_derivative(Dir::T)
    }

    /// `D_x^n`.
    pub fn dx_n(&self, n: u32) -> DiffPoly {
        (0..n).fold(self.clone(), |p, _| p.dx())
    }

    /// Replaces every occurrence of `s` by `q`.
    pub fn substitute(&self, s: Sym, q: &DiffPoly) -> DiffPoly {
        let mut powers: Vec<DiffPoly> = alloc::vec![DiffPoly::one()];
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(s);
            while powers.len() <= e as usize {
                let next = powers.last().unwrap() * q;
                powers.push(next);
            }
            for (pm, pc) in &powers[e as usize].terms {
                out.add_term(rest.mul(pm), c * pc);
            }
        }
        out
    }

    /// Applies `f` to each symbol, substituting the returned polynomial; symbols
    /// mapped to `None` are kept.
    pub fn substitute_with(&self, mut f: impl FnMut(Sym) -> Option<DiffPoly>) -> DiffPoly {
        let mut cache: BTreeMap<Sym, Option<DiffPoly>> = BTreeMap::new();
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let mut acc = DiffPoly::constant(c.clone());
            let mut kept = Vec::new();
            for &(s, e) in &m.0 {
                let rep = cache.entry(s).or_insert_with(|| f(s));
                match rep {
                    Some(q) => acc = &acc * &q.pow(e),
                    None => kept.push((s, e)),
                }
            }
            let kept = Monomial(kept);
            for (pm, pc) in acc.terms {
                out.add_term(kept.mul(&pm), pc);
            }
        }
        out
    }

    /// Drops every monomial whose weighted `(h, τ)` degree exceeds `max_order`.
    pub fn truncate_grid_order(&self, weights: GridWeights, max_order: u32) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| weights.of(m) <= max_order)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn truncate(&self, order: GridOrder) -> DiffPoly {
        self.truncate_grid_order(order.weights, order.max)
    }

    /// Keeps the monomials whose plain total degree in `(h, τ)` is at most `max`.
    pub fn truncate_total_grid_degree(&self, max: u32) -> DiffPoly {
        self.truncate_grid_order(GridWeights::tau_weight(1), max)
    }

    /// Divides by `h^i τ^j`, failing if some monomial has lower powers.
    pub fn divide_grid(&self, i: u32, j: u32) -> Option<DiffPoly> {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let eh = m.exponent(Sym::H);
            let et = m.exponent(Sym::Tau);
            if eh < i || et < j {
                return None;
            }
            let pairs = m.0.iter().map(|&(s, e)| match s {
                Sym::H => (s, e - i),
                Sym::Tau => (s, e - j),
                _ => (s, e),
            });
            out.add_term(Monomial::from_pairs(pairs), c.clone());
        }
        Some(out)
    }

    /// If `self` is affine in `s` (degree at most one), returns the coefficient
    /// of `s` and the `s`-free remainder.
    pub fn split_linear(&self, s: Sym) -> Option<(DiffPoly, DiffPoly)> {
        let mut coeff = DiffPoly::zero();
        let mut rest = DiffPoly::zero();
        for (m, c) in &self.terms {
            match m.split(s) {
                (0, _) => rest.add_term(m.clone(), c.clone()),
                (1, r) => coeff.add_term(r, c.clone()),
                _ => return None,
            }
        }
        Some((coeff, rest))
    }

    /// The monomial that sorts first in canonical order, with its coefficient.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next()
    }

    /// Numeric value with each symbol mapped to a float by `env`.
    pub fn evaluate(&self, mut env: impl FnMut(Sym) -> f64) -> f64 {
        let mut cache: BTreeMap<Sym, f64> = BTreeMap::new();
        let mut sum = 0.0;
        for (m, c) in &self.terms {
            let mut v = c.to_f64().unwrap_or(f64::NAN);
            for &(s, e) in &m.0 {
                let x = *cache.entry(s).or_insert_with(|| env(s));
                v *= powi(x, e);
            }
            sum += v;
        }
        sum
    }

    /// Canonical text (same as `Display`).
    pub fn to_canonical(&self) -> String {
        alloc::format!("{self}")
    }

    /// Parses the canonical syntax (and general `+ - * / ^ ( )` expressions
    /// with constant divisors).
    pub fn parse(s: &str) -> Result<DiffPoly, ParseError> {
        parse::parse(s)
    }
}

fn powi(x: f64, e: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..e {
        acc *= x;
    }
    acc
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl From<Sym> for DiffPoly {
    fn from(s: Sym) -> Self {
        DiffPoly::var(s)
    }
}

impl From<Rational> for DiffPoly {
    fn from(c: Rational) -> Self {
        DiffPoly::constant(c)
    }
}

impl From<i64> for DiffPoly {
    fn from(n: i64) -> Self {
        DiffPoly::int(n)
    }
}

impl<'a> Add<&'a DiffPoly> for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &'a DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for DiffPoly {
    type Output = DiffPoly;
    fn add(mut self, rhs: DiffPoly) -> DiffPoly {
        self += &rhs;
        self
    }
}

impl<'a> AddAssign<&'a DiffPoly> for DiffPoly {
    fn add_assign(&mut self, rhs: &'a DiffPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign for DiffPoly {
    fn add_assign(&mut self, rhs: DiffPoly) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl<'a> Sub<&'a DiffPoly> for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &'a DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for DiffPoly {
    type Output = DiffPoly;
    fn sub(mut self, rhs: DiffPoly) -> DiffPoly {
        self -= &rhs;
        self
    }
}

impl<'a> SubAssign<&'a DiffPoly> for DiffPoly {
    fn sub_assign(&mut self, rhs: &'a DiffPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl SubAssign for DiffPoly {
    fn sub_assign(&mut self, rhs: DiffPoly) {
        *self -= &rhs;
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        -&self
    }
}

impl<'a> Mul<&'a DiffPoly> for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &'a DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: DiffPoly) -> DiffPoly {
        &self * &rhs
    }
}

impl<'a> Mul<&'a Rational> for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &'a Rational) -> DiffPoly {
        self.scale(rhs)
    }
}

impl Mul<Rational> for DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: Rational) -> DiffPoly {
        self.scale(&rhs)
    }
}

/// The Burgers polynomial `u_t + u·u_x − ν·u_xx`.
pub fn burgers() -> DiffPoly {
    let u = DiffPoly::u(0, 0);
    &(&DiffPoly::u(0, 1) + &(&u * &DiffPoly::u(1, 0)))
        - &(&DiffPoly::var(Sym::Nu) * &DiffPoly::u(2, 0))
}

/// `g1 = −(u²/2)_x + ν·u_xx`, the time derivative `u_t` on Burgers solutions.
pub fn g1() -> DiffPoly {
    let u = DiffPoly::u(0, 0);
    let half_u2 = (&u * &u).scale(&rat(1, 2));
    &(-half_u2.dx()) + &(&DiffPoly::var(Sym::Nu) * &DiffPoly::u(2, 0))
}
