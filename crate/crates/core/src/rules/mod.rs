//! Named rewrite rules as parameterised pairs of diagrams, with numerical
//! soundness checks and anchored application.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::{
    Diagram, Dimension, Endpoint, GeneratorKind, IdMap, NodeId, PhaseVector, Role,
};
use crate::error::{Result, ZxwError};
use crate::interpret::interpret;
use crate::random;

pub mod build;
mod registry;

pub use registry::builtin_rules;

/// Tolerance of the soundness suite.
pub const SOUNDNESS_TOL: f64 = 1e-9;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tier {
    Axiom,
    DerivedLemma,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Match the left-hand side, insert the right-hand side.
    Forward,
    Backward,
}

/// What a free parameter ranges over.
#[derive(Copy, Clone, Debug)]
pub enum ParamKind {
    /// A Z-box phase vector `(a_1, …, a_{d-1})`.
    Phases,
    /// A phase vector without zero entries.
    NonZeroPhases,
    Scalar,
    NonZeroScalar,
    /// `d-1` angles for a green spider.
    Angles,
    /// An integer in `lo(d)..=hi(d)`: an arity, index or weight.
    Int {
        lo: fn(Dimension) -> i64,
        hi: fn(Dimension) -> i64,
    },
    /// A full amplitude vector on as many wires as the integer parameter at
    /// position `wires` says.
    Amplitudes {
        wires: usize,
    },
}

#[derive(Copy, Clone, Debug)]
pub struct ParamDecl {
    pub name: &'static str,
    pub kind: ParamKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamValue {
    Phases(PhaseVector),
    Scalar(C64),
    Angles(Vec<f64>),
    Int(i64),
    Amplitudes(Vec<C64>),
}

/// Parameter values, in the order of the rule's declarations.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RuleParams(pub Vec<ParamValue>);

impl RuleParams {
    fn get(&self, k: usize) -> Result<&ParamValue> {
        self.0
            .get(k)
            .ok_or_else(|| ZxwError::InvalidParameters(format!("missing parameter {k}")))
    }

    fn wrong(k: usize, what: &str) -> ZxwError {
        ZxwError::InvalidParameters(format!("parameter {k} is not {what}"))
    }

    pub fn phases(&self, k: usize) -> Result<PhaseVector> {
        match self.get(k)? {
            ParamValue::Phases(a) => Ok(a.clone()),
            _ => Err(Self::wrong(k, "a phase vector")),
        }
    }

    pub fn scalar(&self, k: usize) -> Result<C64> {
        match self.get(k)? {
            ParamValue::Scalar(x) => Ok(*x),
            _ => Err(Self::wrong(k, "a scalar")),
        }
    }

    pub fn angles(&self, k: usize) -> Result<Vec<f64>> {
        match self.get(k)? {
            ParamValue::Angles(a) => Ok(a.clone()),
            _ => Err(Self::wrong(k, "a list of angles")),
        }
    }

    pub fn int(&self, k: usize) -> Result<i64> {
        match self.get(k)? {
            ParamValue::Int(x) => Ok(*x),
            _ => Err(Self::wrong(k, "an integer")),
        }
    }

    /// An integer parameter used as a count.
    pub fn count(&self, k: usize) -> Result<usize> {
        usize::try_from(self.int(k)?).map_err(|_| Self::wrong(k, "a nonnegative integer"))
    }

    pub fn amplitudes(&self, k: usize) -> Result<Vec<C64>> {
        match self.get(k)? {
            ParamValue::Amplitudes(v) => Ok(v.clone()),
            _ => Err(Self::wrong(k, "an amplitude vector")),
        }
    }
}

pub type SideBuilder = Arc<dyn Fn(Dimension, &RuleParams) -> Result<Diagram> + Send + Sync>;

/// An equation between two parameterised diagrams.
#[derive(Clone)]
pub struct RewriteRule {
    pub name: String,
    pub tier: Tier,
    pub summary: String,
    pub params: Vec<ParamDecl>,
    lhs: SideBuilder,
    rhs: SideBuilder,
}

impl fmt::Debug for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RewriteRule")
            .field("name", &self.name)
            .field("tier", &self.tier)
            .field("params", &self.params)
            .finish_non_exhaustive()
    }
}

impl RewriteRule {
    pub fn new(
        name: impl Into<String>,
        tier: Tier,
        summary: impl Into<String>,
        params: Vec<ParamDecl>,
        lhs: impl Fn(Dimension, &RuleParams) -> Result<Diagram> + Send + Sync + 'static,
        rhs: impl Fn(Dimension, &RuleParams) -> Result<Diagram> + Send + Sync + 'static,
    ) -> Self {
        RewriteRule {
            name: name.into(),
            tier,
            summary: summary.into(),
            params,
            lhs: Arc::new(lhs),
            rhs: Arc::new(rhs),
        }
    }

    pub fn lhs(&self, d: Dimension, p: &RuleParams) -> Result<Diagram> {
        (self.lhs)(d, p)
    }

    pub fn rhs(&self, d: Dimension, p: &RuleParams) -> Result<Diagram> {
        (self.rhs)(d, p)
    }

    /// Both sides, checked to have the same boundary.
    pub fn instantiate(&self, d: Dimension, p: &RuleParams) -> Result<(Diagram, Diagram)> {
        let not_here = |e: ZxwError| ZxwError::NotInstantiable {
            rule: self.name.clone(),
            reason: e.to_string(),
        };
        let l = self.lhs(d, p).map_err(not_here)?;
        let r = self.rhs(d, p).map_err(not_here)?;
        if (l.inputs(), l.outputs()) != (r.inputs(), r.outputs()) {
            return Err(ZxwError::ArityMismatch(format!(
                "{}: lhs is {}->{} but rhs is {}->{}",
                self.name,
                l.inputs(),
                l.outputs(),
                r.inputs(),
                r.outputs()
            )));
        }
        Ok((l, r))
    }

    /// Draw a parameter assignment. Fails when an integer range is empty at
    /// this dimension.
    pub fn sample_params<R: Rng + ?Sized>(&self, rng: &mut R, d: Dimension) -> Result<RuleParams> {
        let mut values: Vec<ParamValue> = Vec::with_capacity(self.params.len());
        for decl in &self.params {
            let v = match decl.kind {
                ParamKind::Phases => ParamValue::Phases(random::sample_phases(rng, d)),
                ParamKind::NonZeroPhases => {
                    ParamValue::Phases(random::sample_nonzero_phases(rng, d))
                }
                ParamKind::Scalar => ParamValue::Scalar(random::sample_complex(rng, d)),
                ParamKind::NonZeroScalar => ParamValue::Scalar(random::sample_nonzero(rng, d)),
                ParamKind::Angles => ParamValue::Angles(random::sample_angles(rng, d)),
                ParamKind::Int { lo, hi } => {
                    let (lo, hi) = (lo(d), hi(d));
                    if lo > hi {
                        return Err(ZxwError::NotInstantiable {
                            rule: self.name.clone(),
                            reason: format!("{} has no admissible value at d={d}", decl.name),
                        });
                    }
                    ParamValue::Int(rng.gen_range(lo..=hi))
                }
                ParamKind::Amplitudes { wires } => {
                    let m = match values.get(wires) {
                        Some(ParamValue::Int(m)) => *m as usize,
                        _ => {
                            return Err(ZxwError::InvalidParameters(format!(
                                "{}: amplitude length refers to a non-integer parameter",
                                self.name
                            )))
                        }
                    };
                    ParamValue::Amplitudes(
                        (0..d.pow(m))
                            .map(|_| random::sample_complex(rng, d))
                            .collect(),
                    )
                }
            };
            values.push(v);
        }
        Ok(RuleParams(values))
    }

    /// The same rule with its right-hand side multiplied by `factor`. Used
    /// to check that the soundness suite catches a wrong rule.
    pub fn with_scaled_rhs(&self, factor: C64) -> RewriteRule {
        let rhs = self.rhs.clone();
        let mut out = self.clone();
        out.name = format!("{}*{}", self.name, crate::diagram::fmt_complex(factor));
        out.rhs = Arc::new(move |d, p| {
            let r = rhs(d, p)?;
            r.tensor(&Diagram::generator(
                GeneratorKind::Scalar { value: factor },
                d,
            )?)
        });
        out
    }
}

/// Outcome of [`check_soundness`] for one rule at one dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SoundnessReport {
    pub rule: String,
    pub d: usize,
    pub samples: usize,
    /// Largest entrywise distance between the two sides over all draws;
    /// absent when the rule could not be instantiated.
    pub max_dev: Option<f64>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// The generator seed for a rule at a dimension.
fn stream_seed(seed: u64, rule: &str, d: Dimension) -> u64 {
    // FNV-1a, so reports are reproducible across toolchains.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in rule.bytes().chain((d.get() as u64).to_le_bytes()) {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h ^ seed
}

/// Interpret both sides of `rule` for `samples` seeded parameter draws and
/// record the worst deviation. Failures to instantiate or interpret are
/// reported, not raised.
pub fn check_soundness(
    rule: &RewriteRule,
    d: Dimension,
    samples: usize,
    seed: u64,
    tol: f64,
) -> SoundnessReport {
    let mut report = SoundnessReport {
        rule: rule.name.clone(),
        d: d.get(),
        samples,
        max_dev: None,
        pass: false,
        error: None,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, &rule.name, d));
    let mut worst: f64 = 0.0;
    for _ in 0..samples.max(1) {
        let outcome = rule.sample_params(&mut rng, d).and_then(|p| {
            let (l, r) = rule.instantiate(d, &p)?;
            let (a, b) = (interpret(&l)?, interpret(&r)?);
            a.max_abs_diff(&b).ok_or_else(|| {
                ZxwError::ArityMismatch(format!("{}: sides differ in shape", rule.name))
            })
        });
        match outcome {
            Ok(dev) => worst = worst.max(dev),
            Err(e) => {
                report.error = Some(e.to_string());
                return report;
            }
        }
    }
    report.max_dev = Some(worst);
    report.pass = worst <= tol;
    report
}

/// [`check_soundness`] for every rule and dimension, in parallel. Reports
/// come back in rule order, then dimension order.
pub fn verify_all(
    rules: &[RewriteRule],
    dims: &[Dimension],
    samples: usize,
    seed: u64,
    tol: f64,
) -> Vec<SoundnessReport> {
    let jobs: Vec<(&RewriteRule, Dimension)> = rules
        .iter()
        .flat_map(|r| dims.iter().map(move |d| (r, *d)))
        .collect();
    jobs.par_iter()
        .map(|(r, d)| check_soundness(r, *d, samples, seed, tol))
        .collect()
}

/// Look a rule up by name.
pub fn find_rule<'a>(rules: &'a [RewriteRule], name: &str) -> Option<&'a RewriteRule> {
    rules.iter().find(|r| r.name == name)
}

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

/// Same kind and arity, numerical parameters within `tol`.
pub fn kinds_match(a: &GeneratorKind, b: &GeneratorKind, d: Dimension, tol: f64) -> bool {
    use GeneratorKind::*;
    let (Ok(a), Ok(b)) = (a.checked(d), b.checked(d)) else {
        return false;
    };
    if a.arity(d) != b.arity(d) {
        return false;
    }
    match (&a, &b) {
        (ZBox { phases: x, .. }, ZBox { phases: y, .. }) => {
            x.len() == y.len()
                && x.entries()
                    .iter()
                    .zip(y.entries())
                    .all(|(p, q)| close(*p, *q, tol))
        }
        (GreenSpider { angles: x, .. }, GreenSpider { angles: y, .. }) => {
            x.len() == y.len()
                && x.iter()
                    .zip(y)
                    .all(|(p, q)| close(C64::from_polar(1.0, *p), C64::from_polar(1.0, *q), tol))
        }
        (LabeledBox { value: x, .. }, LabeledBox { value: y, .. })
        | (Scalar { value: x }, Scalar { value: y }) => close(*x, *y, tol),
        (WGeneral { transpose: s, .. }, WGeneral { transpose: t, .. }) => s == t,
        _ => a == b,
    }
}

/// Replace the occurrence of one side of `rule` that `anchor` points at.
///
/// `anchor` maps every node of the instantiated pattern side to a node of
/// `diagram`. Kinds and parameters must agree, every wire between pattern
/// nodes must be present, and pattern wires to the boundary mark the ports
/// where the other side is glued in. Returns the rewritten diagram and the
/// ids the inserted nodes received.
pub fn apply_at(
    diagram: &Diagram,
    rule: &RewriteRule,
    params: &RuleParams,
    anchor: &BTreeMap<NodeId, NodeId>,
    direction: Direction,
) -> Result<(Diagram, IdMap)> {
    let d = diagram.dim();
    let (lhs, rhs) = rule.instantiate(d, params)?;
    let (pattern, replacement) = match direction {
        Direction::Forward => (lhs, rhs),
        Direction::Backward => (rhs, lhs),
    };
    let miss = |msg: String| Err(ZxwError::PatternMismatch(format!("{}: {msg}", rule.name)));
    if pattern.nodes().is_empty() {
        return miss("the pattern has no nodes to anchor".into());
    }
    let keys: BTreeSet<NodeId> = anchor.keys().copied().collect();
    let wanted: BTreeSet<NodeId> = pattern.nodes().keys().copied().collect();
    if keys != wanted {
        return miss(format!(
            "anchor covers {keys:?} but the pattern has nodes {wanted:?}"
        ));
    }
    let targets: BTreeSet<NodeId> = anchor.values().copied().collect();
    if targets.len() != anchor.len() {
        return miss("anchor is not injective".into());
    }
    for (p, t) in anchor {
        let Some(node) = diagram.node(*t) else {
            return miss(format!("{t} is not in the diagram"));
        };
        let want = &pattern.nodes()[p].kind;
        if !kinds_match(want, &node.kind, d, SOUNDNESS_TOL) {
            return miss(format!("{p} is {want} but {t} is {}", node.kind));
        }
    }
    let map = |e: Endpoint| match e {
        Endpoint::Port { node, role, port } => Endpoint::Port {
            node: anchor[&node],
            role,
            port,
        },
        b => b,
    };
    let partners = diagram.partners();
    let n_in = pattern.inputs();
    let mut slots: HashMap<Endpoint, usize> = HashMap::new();
    for w in pattern.wires() {
        let (a, b) = w.ends();
        match (a, b) {
            (Endpoint::Boundary { .. }, Endpoint::Boundary { .. }) => {
                return miss("the pattern has a bare wire between boundary points".into())
            }
            (Endpoint::Boundary { role, pos }, port) | (port, Endpoint::Boundary { role, pos }) => {
                let slot = if role == Role::In { pos } else { n_in + pos };
                slots.insert(map(port), slot);
            }
            _ => {
                if partners.get(&map(a)) != Some(&map(b)) {
                    return miss(format!(
                        "no wire between {} and {} in the diagram",
                        map(a),
                        map(b)
                    ));
                }
            }
        }
    }
    let (out, ids) = diagram.splice(&targets, &slots, &replacement)?;
    if cfg!(debug_assertions) {
        debug_check(diagram, &out, &rule.name)?;
    }
    Ok((out, ids))
}

/// Compare interpretations when both diagrams are small enough to do it
/// quickly.
fn debug_check(before: &Diagram, after: &Diagram, rule: &str) -> Result<()> {
    const MAX_BOUNDARY: usize = 8;
    if before.inputs() + before.outputs() > MAX_BOUNDARY
        || before.dim().pow(before.inputs() + before.outputs()) > 1 << 12
    {
        return Ok(());
    }
    let (Ok(a), Ok(b)) = (interpret(before), interpret(after)) else {
        return Ok(());
    };
    let deviation = a.max_abs_diff(&b).unwrap_or(f64::INFINITY);
    if deviation > SOUNDNESS_TOL * a.max_abs().max(1.0) {
        return Err(ZxwError::Unsound {
            rule: rule.to_string(),
            deviation,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn accessors_check_the_kind() {
        let p = RuleParams(vec![
            ParamValue::Int(-1),
            ParamValue::Scalar(C64::new(1.0, 0.0)),
        ]);
        assert_eq!(p.int(0).unwrap(), -1);
        assert!(matches!(p.count(0), Err(ZxwError::InvalidParameters(_))));
        assert!(matches!(p.phases(1), Err(ZxwError::InvalidParameters(_))));
        assert!(matches!(p.scalar(2), Err(ZxwError::InvalidParameters(_))));
    }

    #[test]
    fn names_are_unique_and_tiers_ordered() {
        let rules = builtin_rules();
        let names: BTreeSet<&str> = rules.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(names.len(), rules.len());
        let first_lemma = rules
            .iter()
            .position(|r| r.tier == Tier::DerivedLemma)
            .unwrap();
        assert!(rules[first_lemma..]
            .iter()
            .all(|r| r.tier == Tier::DerivedLemma));
        for k in 1..=48 {
            assert!(
                names.contains(format!("Lemma{k}").as_str()),
                "Lemma{k} missing"
            );
        }
    }

    #[test]
    fn sampling_is_reproducible_and_in_range() {
        let rules = builtin_rules();
        let s1 = find_rule(&rules, "S1").unwrap();
        let draw = |seed| {
            s1.sample_params(&mut ChaCha8Rng::seed_from_u64(seed), dim(3))
                .unwrap()
        };
        assert_eq!(draw(4), draw(4));
        for seed in 0..50 {
            let k = draw(seed).int(2).unwrap();
            assert!((0..=2).contains(&k));
        }
    }

    #[test]
    fn wrong_parameters_do_not_instantiate() {
        let rules = builtin_rules();
        let s1 = find_rule(&rules, "S1").unwrap();
        let err = s1.instantiate(dim(2), &RuleParams::default()).unwrap_err();
        assert!(matches!(err, ZxwError::NotInstantiable { .. }), "{err}");
    }

    #[test]
    fn reports_follow_rule_then_dimension_order() {
        let rules = builtin_rules();
        let picked: Vec<RewriteRule> = ["Hopf", "S2"]
            .iter()
            .map(|n| find_rule(&rules, n).unwrap().clone())
            .collect();
        let reports = verify_all(&picked, &[dim(3), dim(2)], 2, 1, SOUNDNESS_TOL);
        let order: Vec<(&str, usize)> = reports.iter().map(|r| (r.rule.as_str(), r.d)).collect();
        assert_eq!(order, [("Hopf", 3), ("Hopf", 2), ("S2", 3), ("S2", 2)]);
        assert!(reports.iter().all(|r| r.pass && r.error.is_none()));
    }

    #[test]
    fn scaled_rule_fails_and_is_renamed() {
        let rules = builtin_rules();
        let bad = find_rule(&rules, "S2")
            .unwrap()
            .with_scaled_rhs(C64::new(0.0, 1.0));
        assert!(bad.name.starts_with("S2*"));
        let report = check_soundness(&bad, dim(2), 3, 0, SOUNDNESS_TOL);
        assert!(!report.pass);
        assert!(report.max_dev.unwrap() > 0.5);
    }

    #[test]
    fn kinds_compare_within_tolerance() {
        let d = dim(3);
        let a = GeneratorKind::z_box(
            PhaseVector::new(vec![C64::new(1.0, 0.0), C64::new(2.0, 0.0)]),
            1,
            1,
        );
        let b = GeneratorKind::z_box(
            PhaseVector::new(vec![C64::new(1.0 + 1e-12, 0.0), C64::new(2.0, 0.0)]),
            1,
            1,
        );
        let c = GeneratorKind::z_box(
            PhaseVector::new(vec![C64::new(1.0, 0.0), C64::new(2.0, 0.0)]),
            0,
            2,
        );
        assert!(kinds_match(&a, &b, d, 1e-9));
        assert!(!kinds_match(&a, &b, d, 1e-13));
        assert!(!kinds_match(&a, &c, d, 1e-9));
        assert!(kinds_match(
            &GeneratorKind::pink(4, d, 1, 1),
            &GeneratorKind::pink(1, d, 1, 1),
            d,
            1e-9
        ));
    }
}
