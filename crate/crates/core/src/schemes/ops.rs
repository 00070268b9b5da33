use super::SchemeError;

/// Undivided difference operators on a sampled sequence.
///
/// Operators whose natural location is a half point (`Delta`, `Mu`,
/// `Delta3`, `MuDelta2Half`) are reported at `x_{i+1/2}`; the others at `x_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiscreteOp {
    /// `u_{i+1} − u_i`
    DeltaPlus,
    /// `u_i − u_{i−1}`
    DeltaMinus,
    /// `δu` at `i+1/2`: `u_{i+1} − u_i`
    Delta,
    /// `μu` at `i+1/2`: `(u_i + u_{i+1})/2`
    Mu,
    /// `E^{α/2} u_i`; odd `α` averages the two neighbours of the half point.
    Shift(i32),
    /// `u_{i+1} − 2u_i + u_{i−1}`
    Delta2,
    /// `δ³u` at `i+1/2`
    Delta3,
    /// `u_{i+2} − 4u_{i+1} + 6u_i − 4u_{i−1} + u_{i−2}`
    Delta4,
    /// `(u_{i+1} − u_{i−1})/2`
    MuDelta,
    /// `(u_{i+2} − 2u_{i+1} + 2u_{i−1} − u_{i−2})/2`
    MuDelta3,
    /// `μδ²u` at `i+1/2`: `(δ²u_i + δ²u_{i+1})/2`
    MuDelta2Half,
}

impl DiscreteOp {
    /// Offsets `(lo, hi)` the operator reads relative to `i`.
    pub fn reach(self) -> (i64, i64) {
        match self {
            DiscreteOp::DeltaPlus | DiscreteOp::Delta | DiscreteOp::Mu => (0, 1),
            DiscreteOp::DeltaMinus => (-1, 0),
            DiscreteOp::Shift(a) => {
                let a = a as i64;
                (a.div_euclid(2), (a + 1).div_euclid(2))
            }
            DiscreteOp::Delta2 | DiscreteOp::MuDelta => (-1, 1),
            DiscreteOp::Delta3 | DiscreteOp::MuDelta2Half => (-1, 2),
            DiscreteOp::Delta4 | DiscreteOp::MuDelta3 => (-2, 2),
        }
    }
}

/// Applies `op` at storage index `i`.
pub fn discrete_op(op: DiscreteOp, f: &[f64], i: usize) -> Result<f64, SchemeError> {
    let (lo, hi) = op.reach();
    let i = i as i64;
    if i + lo < 0 || i + hi >= f.len() as i64 {
        return Err(SchemeError::OutOfRange { index: i as usize, len: f.len() });
    }
    let u = |k: i64| f[(i + k) as usize];
    Ok(match op {
        DiscreteOp::DeltaPlus | DiscreteOp::Delta => u(1) - u(0),
        DiscreteOp::DeltaMinus => u(0) - u(-1),
        DiscreteOp::Mu => 0.5 * (u(0) + u(1)),
        DiscreteOp::Shift(a) => {
            if a % 2 == 0 {
                u(a as i64 / 2)
            } else {
                0.5 * (u(lo) + u(hi))
            }
        }
        DiscreteOp::Delta2 => u(1) - 2.0 * u(0) + u(-1),
        DiscreteOp::Delta3 => u(2) - 3.0 * u(1) + 3.0 * u(0) - u(-1),
        DiscreteOp::Delta4 => u(2) - 4.0 * u(1) + 6.0 * u(0) - 4.0 * u(-1) + u(-2),
        DiscreteOp::MuDelta => 0.5 * (u(1) - u(-1)),
        DiscreteOp::MuDelta3 => 0.5 * (u(2) - 2.0 * u(1) + 2.0 * u(-1) - u(-2)),
        DiscreteOp::MuDelta2Half => 0.5 * ((u(1) - 2.0 * u(0) + u(-1)) + (u(2) - 2.0 * u(1) + u(0))),
    })
}
