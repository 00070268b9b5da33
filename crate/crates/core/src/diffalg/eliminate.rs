use alloc::collections::BTreeMap;

use super::{g1, DiffPoly, Sym};

/// Rewrites time derivatives through an evolution relation `u_t = rhs`.
///
/// Every `u_{(a,b)}` with `b ≥ 1` is replaced by `D_x^a` of the `(b−1)`-fold
/// time derivative of `rhs`, itself reduced recursively, until only pure
/// `x`-jets remain. Reductions are memoized per jet coordinate, so one
/// eliminator can be reused across many polynomials.
#[derive(Clone, Debug)]
pub struct Eliminator {
    rhs: DiffPoly,
    cache: BTreeMap<(u32, u32), DiffPoly>,
}

impl Eliminator {
    /// `rhs` must not itself contain time derivatives.
    pub fn new(rhs: DiffPoly) -> Self {
        assert!(
            !rhs.has_time_derivatives(),
            "evolution relation must be free of time derivatives"
        );
        Eliminator {
            rhs,
            cache: BTreeMap::new(),
        }
    }

    /// Elimination through the Burgers relation `u_t = −u·u_x + ν·u_xx`.
    pub fn burgers() -> Self {
        Eliminator::new(g1())
    }

    pub fn rhs(&self) -> &DiffPoly {
        &self.rhs
    }

    /// The `x`-jet expression of `u_{(a,b)}`.
    pub fn reduce_jet(&mut self, a: u32, b: u32) -> DiffPoly {
        if b == 0 {
            return DiffPoly::u(a, 0);
        }
        if let Some(p) = self.cache.get(&(a, b)) {
            return p.clone();
        }
        let out = if a > 0 {
            self.reduce_jet(a - 1, b).dx()
        } else if b == 1 {
            self.rhs.clone()
        } else {
            let prev = self.reduce_jet(0, b - 1);
            let raw = prev.dt();
            self.eliminate(&raw)
        };
        self.cache.insert((a, b), out.clone());
        out
    }

    pub fn eliminate(&mut self, p: &DiffPoly) -> DiffPoly {
        if !p.has_time_derivatives() {
            return p.clone();
        }
        let jets: alloc::vec::Vec<(u32, u32)> = p
            .symbols()
            .into_iter()
            .filter_map(|s| match s {
                Sym::U(a, b) if b > 0 => Some((a, b)),
                _ => None,
            })
            .collect();
        let mut reps: BTreeMap<Sym, DiffPoly> = BTreeMap::new();
        for (a, b) in jets {
            let r = self.reduce_jet(a, b);
            reps.insert(Sym::U(a, b), r);
        }
        p.substitute_with(|s| reps.get(&s).cloned())
    }
}

/// Eliminates all time derivatives through the Burgers relation.
pub fn eliminate_time(p: &DiffPoly) -> DiffPoly {
    Eliminator::burgers().eliminate(p)
}
