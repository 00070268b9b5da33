//! Symbolic reports: symmetry residual tables, differential approximations
//! and the artificial-viscosity constraint table, with committed goldens.

use std::fmt::Write as _;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use invscheme_core::diffalg::{burgers, DiffPoly, GridOrder};
use invscheme_core::modeq::{catalog_entry, differential_approximation_at, ModeqError};
use invscheme_core::schemes::SchemeKind;
use invscheme_core::symmetry::{
    builtin_generators, c_constraint_residuals, default_kappa, default_viscosity, onshell_residual, ConstraintReport,
    GeneratorSet, SymmetryError,
};

pub const SYMMETRY_GOLDEN: &str = include_str!("../goldens/symmetries.txt");
pub const CONSTRAINT_GOLDEN: &str = include_str!("../goldens/c_constraints.txt");

/// Equation a generator set is checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    Burgers,
    Scheme(SchemeKind),
}

impl Target {
    pub const ALL: [Target; 5] = [
        Target::Burgers,
        Target::Scheme(SchemeKind::Ftcs),
        Target::Scheme(SchemeKind::LaxWendroff),
        Target::Scheme(SchemeKind::CrankNicolson),
        Target::Scheme(SchemeKind::Invariant),
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::Burgers => "burgers",
            Target::Scheme(SchemeKind::LaxWendroff) => "lw",
            Target::Scheme(SchemeKind::CrankNicolson) => "cn",
            Target::Scheme(k) => k.name(),
        }
    }

    /// The equation and the truncation applied on shell.
    pub fn equation(self) -> (DiffPoly, Option<GridOrder>) {
        match self {
            Target::Burgers => (burgers(), None),
            Target::Scheme(k) => {
                let e = catalog_entry(k);
                (e.literal, Some(e.modeled_order))
            }
        }
    }
}

impl FromStr for Target {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "burgers" {
            return Ok(Target::Burgers);
        }
        match s.parse::<SchemeKind>() {
            Ok(SchemeKind::HighOrder) | Err(_) => Err(format!("unknown target '{s}' (burgers | ftcs | lw | cn | invariant)")),
            Ok(k) => Ok(Target::Scheme(k)),
        }
    }
}

/// Set/target pairs checked when none are named: each set against the
/// equations it is claimed for, plus the Burgers group on FTCS.
pub fn default_pairs() -> Vec<(GeneratorSet, Target)> {
    use SchemeKind::*;
    vec![
        (GeneratorSet::Burgers6, Target::Burgers),
        (GeneratorSet::Burgers6, Target::Scheme(Ftcs)),
        (GeneratorSet::Fda4, Target::Scheme(Ftcs)),
        (GeneratorSet::Fda4, Target::Scheme(LaxWendroff)),
        (GeneratorSet::Fda4, Target::Scheme(CrankNicolson)),
        (GeneratorSet::Invariant6, Target::Scheme(Invariant)),
    ]
}

pub const ALL_SETS: [GeneratorSet; 3] = [GeneratorSet::Burgers6, GeneratorSet::Fda4, GeneratorSet::Invariant6];

/// Every combination of sets and targets, optionally restricted.
pub fn select_pairs(set: Option<GeneratorSet>, target: Option<Target>) -> Vec<(GeneratorSet, Target)> {
    if set.is_none() && target.is_none() {
        return default_pairs();
    }
    let sets: Vec<GeneratorSet> = set.map_or_else(|| ALL_SETS.to_vec(), |s| vec![s]);
    let targets: Vec<Target> = target.map_or_else(|| Target::ALL.to_vec(), |t| vec![t]);
    sets.iter().flat_map(|&s| targets.iter().map(move |&t| (s, t))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryRow {
    pub generator: String,
    pub set: GeneratorSet,
    pub target: Target,
    pub residual: DiffPoly,
}

impl SymmetryRow {
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.residual.to_canonical().as_bytes()))
    }

    /// `set/name,target,zero_flag,sha256`.
    pub fn machine_line(&self) -> String {
        format!(
            "{}/{},{},{},{}",
            self.set.name(),
            self.generator,
            self.target.name(),
            u8::from(self.residual.is_zero()),
            self.hash()
        )
    }
}

pub fn symmetry_rows(pairs: &[(GeneratorSet, Target)]) -> Result<Vec<SymmetryRow>, SymmetryError> {
    let mut rows = Vec::new();
    for &(set, target) in pairs {
        let (eq, trunc) = target.equation();
        for g in builtin_generators(set) {
            rows.push(SymmetryRow {
                residual: onshell_residual(&g, &eq, trunc)?,
                generator: g.name,
                set,
                target,
            });
        }
    }
    Ok(rows)
}

/// Plain table; nonzero residuals show their leading term.
pub fn symmetry_table(rows: &[SymmetryRow]) -> String {
    let mut s = format!("{:<10} {:<12} {:<10} residual\n", "set", "generator", "target");
    for r in rows {
        let shown = match r.residual.leading_term() {
            None => "0".to_string(),
            Some((m, c)) => {
                let lead = DiffPoly::term(c.clone(), m.clone());
                let more = if r.residual.len() > 1 { format!(" + ({} more terms)", r.residual.len() - 1) } else { String::new() };
                format!("{lead}{more}")
            }
        };
        let _ = writeln!(s, "{:<10} {:<12} {:<10} {shown}", r.set.name(), r.generator, r.target.name());
    }
    s
}

pub fn symmetry_machine(rows: &[SymmetryRow]) -> String {
    rows.iter().map(|r| r.machine_line() + "\n").collect()
}

/// Golden lines missing from or differing in `rows`.
///
/// Lines are matched on their `set/name,target` key; rows whose key the
/// golden lacks are reported too.
pub fn golden_mismatches(rows: &[SymmetryRow], golden: &str) -> Vec<String> {
    let expected: std::collections::BTreeMap<&str, &str> = golden
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .filter_map(|l| {
            let (key, _) = l.rsplit_once(',')?;
            let (key, _) = key.rsplit_once(',')?;
            Some((key, l))
        })
        .collect();
    let mut bad = Vec::new();
    for r in rows {
        let line = r.machine_line();
        let key = format!("{}/{},{}", r.set.name(), r.generator, r.target.name());
        match expected.get(key.as_str()) {
            Some(&g) if g == line => {}
            Some(&g) => bad.push(format!("expected {g}, got {line}")),
            None => bad.push(format!("no golden entry for {key}")),
        }
    }
    bad
}

/// `O(τ^a, h^b)` from `"a,b"`.
pub fn parse_order(s: &str) -> Result<GridOrder, String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("order '{s}' is not 'tau,h'"))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<u32>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| format!("order component '{v}' is not a positive integer"))
    };
    Ok(GridOrder::from_orders(parse(a)?, parse(b)?))
}

/// Differential approximation of `kind`, at `order` or the modeled order.
pub fn modified_equation(kind: SchemeKind, order: Option<GridOrder>) -> Result<DiffPoly, ModeqError> {
    let entry = catalog_entry(kind);
    differential_approximation_at(&entry, order.unwrap_or(entry.modeled_order))
}

/// Computed differential approximation minus the hand-entered representation.
pub fn modified_equation_diff(kind: SchemeKind) -> Result<DiffPoly, ModeqError> {
    Ok(&modified_equation(kind, None)? - &catalog_entry(kind).literal)
}

/// Constraint table of the default artificial viscosity.
pub fn default_constraint_report() -> ConstraintReport {
    c_constraint_residuals(&default_viscosity(default_kappa())).expect("default C has no time derivatives")
}
