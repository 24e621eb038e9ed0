//! Discrete observables and their statistics under an s-map: joint
//! distributions, first joint moments, covariance, variance, correlation, and
//! the pair of classical probability spaces that carry them.

use crate::lattice::{Element, QuantumLogic};
use crate::rational::{self, Rational};
use crate::smap::SMap;
use crate::state::State;
use num_traits::{One, Signed, Zero};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObservableError {
    #[error("observable has no values")]
    Empty,
    #[error("value {0} is assigned twice")]
    DuplicateValue(String),
    #[error("value {0} is assigned the zero element")]
    ZeroElement(String),
    #[error("elements for values {0} and {1} are not orthogonal")]
    NotOrthogonal(String, String),
    #[error("assigned elements join to `{0}`, not 1")]
    JoinNotOne(String),
    #[error("variance of an observable is zero")]
    DegenerateVariance,
}

/// Observable with finite spectrum: each value `t` is sent to a nonzero
/// element `x({t})`; the elements are mutually orthogonal and join to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteObservable {
    logic: Arc<QuantumLogic>,
    // sorted by value
    assignment: Vec<(Rational, Element)>,
}

impl DiscreteObservable {
    pub fn new(logic: &Arc<QuantumLogic>, assignment: Vec<(Rational, Element)>) -> Result<Self, ObservableError> {
        let mut assignment = assignment;
        assignment.sort_by(|x, y| x.0.cmp(&y.0));
        if assignment.is_empty() {
            return Err(ObservableError::Empty);
        }
        for w in assignment.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(ObservableError::DuplicateValue(rational::fraction(&w[0].0)));
            }
        }
        if let Some((t, _)) = assignment.iter().find(|(_, e)| *e == logic.zero()) {
            return Err(ObservableError::ZeroElement(rational::fraction(t)));
        }
        for (i, (t, a)) in assignment.iter().enumerate() {
            for (s, b) in &assignment[i + 1..] {
                if !logic.is_orthogonal(*a, *b) {
                    return Err(ObservableError::NotOrthogonal(
                        rational::fraction(t),
                        rational::fraction(s),
                    ));
                }
            }
        }
        let joined = logic.join_all(assignment.iter().map(|(_, e)| *e));
        if joined != logic.one() {
            return Err(ObservableError::JoinNotOne(logic.name(joined).to_string()));
        }
        Ok(DiscreteObservable {
            logic: logic.clone(),
            assignment,
        })
    }

    pub fn logic(&self) -> &Arc<QuantumLogic> {
        &self.logic
    }

    /// `(t, x({t}))` pairs in increasing order of `t`.
    pub fn assignment(&self) -> &[(Rational, Element)] {
        &self.assignment
    }

    pub fn spectrum(&self) -> impl Iterator<Item = &Rational> {
        self.assignment.iter().map(|(t, _)| t)
    }

    pub fn element_of(&self, t: &Rational) -> Option<Element> {
        self.assignment.iter().find(|(s, _)| s == t).map(|(_, e)| *e)
    }

    /// The range `R(x)`: joins of every subset of the assigned elements.
    pub fn range(&self) -> Vec<Element> {
        let mut out: Vec<Element> = Vec::new();
        let k = self.assignment.len().min(20);
        for mask in 0u32..(1 << k) {
            let e = self
                .logic
                .join_all((0..k).filter(|i| mask >> i & 1 == 1).map(|i| self.assignment[i].1));
            if !out.contains(&e) {
                out.push(e);
            }
        }
        out.sort();
        out
    }

    /// `g ∘ x`: values `g(t)`, with elements of equal images joined.
    pub fn compose<G: Fn(&Rational) -> Rational>(&self, g: G) -> DiscreteObservable {
        let mut merged: Vec<(Rational, Element)> = Vec::new();
        for (t, e) in &self.assignment {
            let image = g(t);
            match merged.iter_mut().find(|(s, _)| *s == image) {
                Some(slot) => slot.1 = self.logic.join(slot.1, *e),
                None => merged.push((image, *e)),
            }
        }
        merged.sort_by(|x, y| x.0.cmp(&y.0));
        DiscreteObservable {
            logic: self.logic.clone(),
            assignment: merged,
        }
    }

    /// Every pair of assigned elements is compatible.
    pub fn is_compatible_with(&self, other: &DiscreteObservable) -> bool {
        self.assignment
            .iter()
            .all(|(_, a)| other.assignment.iter().all(|(_, b)| self.logic.is_compatible(*a, *b)))
    }

    /// `m(x) = Σ t·m(x({t}))`.
    pub fn expectation(&self, m: &State) -> Rational {
        self.assignment.iter().map(|(t, e)| t * m.value(*e)).sum()
    }
}

/// Table `p_{x,y}(t, s) = p(x({t}), y({s}))` on `σ(x) × σ(y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointDistribution {
    pub row_values: Vec<Rational>,
    pub col_values: Vec<Rational>,
    pub table: Vec<Vec<Rational>>,
}

impl JointDistribution {
    pub fn get(&self, t: &Rational, s: &Rational) -> Option<&Rational> {
        let i = self.row_values.iter().position(|v| v == t)?;
        let j = self.col_values.iter().position(|v| v == s)?;
        Some(&self.table[i][j])
    }

    pub fn total(&self) -> Rational {
        self.table.iter().flatten().sum()
    }

    pub fn row_sums(&self) -> Vec<Rational> {
        self.table.iter().map(|row| row.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<Rational> {
        (0..self.col_values.len())
            .map(|j| self.table.iter().map(|row| &row[j]).sum())
            .collect()
    }
}

pub fn joint_distribution(p: &SMap, x: &DiscreteObservable, y: &DiscreteObservable) -> JointDistribution {
    let table: Vec<Vec<Rational>> = x
        .assignment
        .iter()
        .map(|(_, a)| y.assignment.iter().map(|(_, b)| p.value(*a, *b).clone()).collect())
        .collect();
    let joint = JointDistribution {
        row_values: x.spectrum().cloned().collect(),
        col_values: y.spectrum().cloned().collect(),
        table,
    };
    let nu = |e: Element| p.value(e, e).clone();
    assert!(joint.total().is_one(), "joint distribution does not sum to 1");
    assert_eq!(
        joint.row_sums(),
        x.assignment.iter().map(|(_, a)| nu(*a)).collect::<Vec<_>>()
    );
    assert_eq!(
        joint.col_sums(),
        y.assignment.iter().map(|(_, b)| nu(*b)).collect::<Vec<_>>()
    );
    joint
}

/// `ν(x)`: expectation under the diagonal state of `p`.
pub fn mean(p: &SMap, x: &DiscreteObservable) -> Rational {
    x.assignment.iter().map(|(t, e)| t * p.value(*e, *e)).sum()
}

/// `p(x, y) = Σᵢ Σⱼ tᵢ·sⱼ·p(x({tᵢ}), y({sⱼ}))`.
pub fn first_joint_moment(p: &SMap, x: &DiscreteObservable, y: &DiscreteObservable) -> Rational {
    let mut acc = Rational::zero();
    for (t, a) in &x.assignment {
        for (s, b) in &y.assignment {
            acc += t * s * p.value(*a, *b);
        }
    }
    acc
}

/// `c(x, y) = p(x, y) − ν(x)·ν(y)`. Not symmetric in general.
pub fn covariance(p: &SMap, x: &DiscreteObservable, y: &DiscreteObservable) -> Rational {
    first_joint_moment(p, x, y) - mean(p, x) * mean(p, y)
}

pub fn variance(p: &SMap, x: &DiscreteObservable) -> Rational {
    covariance(p, x, x)
}

/// `r(x, y) = c(x, y) / √(var(x)·var(y))`, the only floating-point quantity.
pub fn correlation(p: &SMap, x: &DiscreteObservable, y: &DiscreteObservable) -> Result<f64, ObservableError> {
    let (vx, vy) = (variance(p, x), variance(p, y));
    if vx.is_zero() || vy.is_zero() {
        return Err(ObservableError::DegenerateVariance);
    }
    let c = covariance(p, x, y);
    if c.is_zero() {
        return Ok(0.0);
    }
    Ok(rational::to_f64(&c) / rational::to_f64(&(vx * vy)).sqrt())
}

/// `[[c(x,x), c(x,y)], [c(y,x), c(y,y)]]` with a symmetry verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CovarianceMatrix {
    pub entries: [[Rational; 2]; 2],
}

impl CovarianceMatrix {
    pub fn is_symmetric(&self) -> bool {
        self.entries[0][1] == self.entries[1][0]
    }
}

pub fn covariance_matrix(p: &SMap, x: &DiscreteObservable, y: &DiscreteObservable) -> CovarianceMatrix {
    CovarianceMatrix {
        entries: [
            [covariance(p, x, x), covariance(p, x, y)],
            [covariance(p, y, x), covariance(p, y, y)],
        ],
    }
}

/// Finite probability space `Ω` of value pairs with a measure and the two
/// coordinate random variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSpace {
    /// `(ξ(ω), η(ω), P({ω}))` for each outcome.
    pub outcomes: Vec<(Rational, Rational, Rational)>,
}

impl FiniteSpace {
    pub fn total(&self) -> Rational {
        self.outcomes.iter().map(|(_, _, w)| w).sum()
    }

    pub fn mean_xi(&self) -> Rational {
        self.outcomes.iter().map(|(u, _, w)| u * w).sum()
    }

    pub fn mean_eta(&self) -> Rational {
        self.outcomes.iter().map(|(_, v, w)| v * w).sum()
    }

    pub fn cov(&self) -> Rational {
        let (mu, mv) = (self.mean_xi(), self.mean_eta());
        self.outcomes.iter().map(|(u, v, w)| (u - &mu) * (v - &mv) * w).sum()
    }

    pub fn var_xi(&self) -> Rational {
        let mu = self.mean_xi();
        self.outcomes.iter().map(|(u, _, w)| (u - &mu) * (u - &mu) * w).sum()
    }

    pub fn var_eta(&self) -> Rational {
        let mv = self.mean_eta();
        self.outcomes.iter().map(|(_, v, w)| (v - &mv) * (v - &mv) * w).sum()
    }
}

/// Two classical spaces carrying the statistics of `x` and `y`:
/// `Ω₁ = σ(x) × σ(y)` with `P₁ = p_{x,y}` and `Ω₂ = σ(y) × σ(x)` with
/// `P₂ = p_{y,x}`. In both, `ξ` reads the `x` value and `η` the `y` value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalRepresentation {
    pub first: FiniteSpace,
    pub second: FiniteSpace,
}

pub fn classical_representation(p: &SMap, x: &DiscreteObservable, y: &DiscreteObservable) -> ClassicalRepresentation {
    let mut first = Vec::new();
    for (t, a) in &x.assignment {
        for (s, b) in &y.assignment {
            first.push((t.clone(), s.clone(), p.value(*a, *b).clone()));
        }
    }
    let mut second = Vec::new();
    for (s, b) in &y.assignment {
        for (t, a) in &x.assignment {
            second.push((t.clone(), s.clone(), p.value(*b, *a).clone()));
        }
    }
    ClassicalRepresentation {
        first: FiniteSpace { outcomes: first },
        second: FiniteSpace { outcomes: second },
    }
}

/// Checks the classical representation against the moment route: both
/// spaces are probability spaces, the coordinate means are `ν(x)` and `ν(y)`,
/// `cov₁ = c(x, y)`, `cov₂ = c(y, x)`, the coordinate variances are
/// `var(x)`, `var(y)`, and both squared covariances are bounded by
/// `var(x)·var(y)`. Returns a description of every failed identity.
pub fn verify_classical(
    p: &SMap,
    x: &DiscreteObservable,
    y: &DiscreteObservable,
    rep: &ClassicalRepresentation,
) -> Vec<String> {
    let mut failures = Vec::new();
    let (nx, ny) = (mean(p, x), mean(p, y));
    let (cxy, cyx) = (covariance(p, x, y), covariance(p, y, x));
    let (vx, vy) = (variance(p, x), variance(p, y));
    let mut expect = |label: &str, got: Rational, want: &Rational| {
        if &got != want {
            failures.push(format!(
                "{label}: {} ≠ {}",
                rational::fraction(&got),
                rational::fraction(want)
            ));
        }
    };
    for (k, space) in [(1, &rep.first), (2, &rep.second)] {
        expect(&format!("P{k} total"), space.total(), &Rational::one());
        expect(&format!("E{k}(ξ)"), space.mean_xi(), &nx);
        expect(&format!("E{k}(η)"), space.mean_eta(), &ny);
        expect(&format!("var{k}(ξ)"), space.var_xi(), &vx);
        expect(&format!("var{k}(η)"), space.var_eta(), &vy);
    }
    expect("cov1", rep.first.cov(), &cxy);
    expect("cov2", rep.second.cov(), &cyx);
    if rep
        .first
        .outcomes
        .iter()
        .chain(&rep.second.outcomes)
        .any(|(_, _, w)| w.is_negative())
    {
        failures.push("negative outcome weight".to_string());
    }
    let bound = &vx * &vy;
    for (label, c) in [("c(x,y)", &cxy), ("c(y,x)", &cyx)] {
        if c * c > bound {
            failures.push(format!("Cauchy–Schwarz fails for {label}"));
        }
    }
    failures
}

/// Everything `stats` reports for a pair of observables.
#[derive(Debug, Clone, PartialEq)]
pub struct StatsReport {
    pub joint_xy: JointDistribution,
    pub joint_yx: JointDistribution,
    pub mean_x: Rational,
    pub mean_y: Rational,
    pub moment_xy: Rational,
    pub moment_yx: Rational,
    pub cov_xy: Rational,
    pub cov_yx: Rational,
    pub var_x: Rational,
    pub var_y: Rational,
    /// `None` when a variance is zero.
    pub corr_xy: Option<f64>,
    pub corr_yx: Option<f64>,
    pub matrix: CovarianceMatrix,
    pub compatible: bool,
}

impl StatsReport {
    pub fn compute(p: &SMap, x: &DiscreteObservable, y: &DiscreteObservable) -> Self {
        StatsReport {
            joint_xy: joint_distribution(p, x, y),
            joint_yx: joint_distribution(p, y, x),
            mean_x: mean(p, x),
            mean_y: mean(p, y),
            moment_xy: first_joint_moment(p, x, y),
            moment_yx: first_joint_moment(p, y, x),
            cov_xy: covariance(p, x, y),
            cov_yx: covariance(p, y, x),
            var_x: variance(p, x),
            var_y: variance(p, y),
            corr_xy: correlation(p, x, y).ok(),
            corr_yx: correlation(p, y, x).ok(),
            matrix: covariance_matrix(p, x, y),
            compatible: x.is_compatible_with(y),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, parse, ratio};
    use crate::smap::complete_bounds;

    fn mo2() -> Arc<QuantumLogic> {
        Arc::new(QuantumLogic::build(&["0", "1", "a", "a'", "b", "b'"], &[], &[("a", "a'"), ("b", "b'")]).unwrap())
    }

    fn smap(l: &Arc<QuantumLogic>, rows: [[&str; 4]; 4]) -> SMap {
        let names = ["a", "a'", "b", "b'"];
        let n = l.len();
        let mut entries = vec![None; n * n];
        for (r, vals) in names.iter().zip(rows) {
            for (c, v) in names.iter().zip(vals) {
                let (a, b) = (l.element(r).unwrap(), l.element(c).unwrap());
                entries[a.0 * n + b.0] = Some(parse(v).unwrap());
            }
        }
        SMap::validate(l, complete_bounds(l, entries).unwrap()).unwrap()
    }

    fn example_21(l: &Arc<QuantumLogic>) -> SMap {
        smap(
            l,
            [
                ["0.4", "0", "0.12", "0.28"],
                ["0", "0.6", "0.18", "0.42"],
                ["0.08", "0.22", "0.3", "0"],
                ["0.32", "0.38", "0", "0.7"],
            ],
        )
    }

    fn corrected_22(l: &Arc<QuantumLogic>) -> SMap {
        smap(
            l,
            [
                ["0.4", "0", "0.08", "0.32"],
                ["0", "0.6", "0.22", "0.38"],
                ["0.08", "0.22", "0.3", "0"],
                ["0.32", "0.38", "0", "0.7"],
            ],
        )
    }

    fn obs(l: &Arc<QuantumLogic>, pairs: &[(i64, &str)]) -> DiscreteObservable {
        DiscreteObservable::new(l, pairs.iter().map(|(t, e)| (int(*t), l.element(e).unwrap())).collect()).unwrap()
    }

    fn xy(l: &Arc<QuantumLogic>) -> (DiscreteObservable, DiscreteObservable) {
        (obs(l, &[(-1, "a"), (1, "a'")]), obs(l, &[(0, "b"), (5, "b'")]))
    }

    #[test]
    fn build_errors() {
        let l = mo2();
        let e = |n| l.element(n).unwrap();
        assert_eq!(
            DiscreteObservable::new(&l, vec![(int(1), e("a")), (int(1), e("a'"))]).unwrap_err(),
            ObservableError::DuplicateValue("1".into())
        );
        assert_eq!(
            DiscreteObservable::new(&l, vec![(int(1), e("a")), (int(2), e("b"))]).unwrap_err(),
            ObservableError::NotOrthogonal("1".into(), "2".into())
        );
        assert_eq!(
            DiscreteObservable::new(&l, vec![(int(1), e("a"))]).unwrap_err(),
            ObservableError::JoinNotOne("a".into())
        );
        assert_eq!(
            DiscreteObservable::new(&l, vec![(int(1), l.one()), (int(2), l.zero())]).unwrap_err(),
            ObservableError::ZeroElement("2".into())
        );
        let constant = obs(&l, &[(7, "1")]);
        assert_eq!(constant.range(), vec![l.zero(), l.one()]);
    }

    #[test]
    fn compose_merges_and_shifts() {
        let l = mo2();
        let (x, y) = xy(&l);
        let sq = x.compose(|t| t * t);
        assert_eq!(sq.assignment(), &[(int(1), l.one())]);
        let centered = x.compose(|t| t - ratio(1, 5));
        let vals: Vec<_> = centered.spectrum().cloned().collect();
        assert_eq!(vals, vec![ratio(-6, 5), ratio(4, 5)]);
        assert_eq!(centered.element_of(&ratio(-6, 5)), x.element_of(&int(-1)));
        assert_eq!(y.compose(|t| t.clone()), y);
    }

    #[test]
    fn compatibility_of_observables() {
        let l = mo2();
        let (x, y) = xy(&l);
        assert!(!x.is_compatible_with(&y));
        assert!(x.is_compatible_with(&x));
    }

    #[test]
    fn example_statistics() {
        let l = mo2();
        let p = example_21(&l);
        let (x, y) = xy(&l);
        assert_eq!(x.expectation(&p.diagonal()), ratio(1, 5));
        assert_eq!(mean(&p, &y), ratio(7, 2));
        assert_eq!(obs(&l, &[(7, "1")]).expectation(&p.diagonal()), int(7));

        let jxy = joint_distribution(&p, &x, &y);
        assert_eq!(jxy.get(&int(-1), &int(0)), Some(&ratio(3, 25)));
        assert_eq!(jxy.get(&int(-1), &int(5)), Some(&ratio(7, 25)));
        assert_eq!(jxy.get(&int(1), &int(0)), Some(&ratio(9, 50)));
        assert_eq!(jxy.get(&int(1), &int(5)), Some(&ratio(21, 50)));
        let jyx = joint_distribution(&p, &y, &x);
        assert_eq!(jyx.get(&int(0), &int(-1)), Some(&ratio(2, 25)));
        assert_eq!(jyx.get(&int(5), &int(1)), Some(&ratio(19, 50)));
        let jxx = joint_distribution(&p, &x, &x);
        assert_eq!(jxx.get(&int(-1), &int(1)), Some(&int(0)));
        assert_eq!(jxx.get(&int(1), &int(1)), Some(&ratio(3, 5)));

        assert_eq!(first_joint_moment(&p, &x, &y), ratio(7, 10));
        assert_eq!(first_joint_moment(&p, &y, &x), ratio(3, 10));
        assert_eq!(first_joint_moment(&p, &x, &x), int(1));
        assert_eq!(covariance(&p, &x, &y), int(0));
        assert_eq!(covariance(&p, &y, &x), ratio(-2, 5));
        assert_eq!(variance(&p, &x), ratio(24, 25));
        assert_eq!(variance(&p, &y), ratio(21, 4));

        assert_eq!(correlation(&p, &x, &y).unwrap(), 0.0);
        let r = correlation(&p, &y, &x).unwrap();
        let oracle = -0.4 / (0.96f64 * 5.25).sqrt();
        assert!((r - oracle).abs() < 1e-12);
        assert!((r + 0.178).abs() < 5e-4);
        assert!((correlation(&p, &x, &x).unwrap() - 1.0).abs() < 1e-12);

        let m = covariance_matrix(&p, &x, &y);
        assert_eq!(m.entries, [[ratio(24, 25), int(0)], [ratio(-2, 5), ratio(21, 4)]]);
        assert!(!m.is_symmetric());
        let mxx = covariance_matrix(&p, &x, &x);
        assert!(mxx.entries.iter().flatten().all(|v| *v == ratio(24, 25)));
    }

    #[test]
    fn degenerate_variance() {
        let l = mo2();
        let p = example_21(&l);
        let (x, _) = xy(&l);
        let c = obs(&l, &[(7, "1")]);
        assert_eq!(correlation(&p, &x, &c), Err(ObservableError::DegenerateVariance));
        let report = StatsReport::compute(&p, &x, &c);
        assert!(report.corr_xy.is_none());
    }

    #[test]
    fn corrected_second_example_is_symmetric_without_compatibility() {
        let l = mo2();
        let p = corrected_22(&l);
        let (x, y) = xy(&l);
        let report = StatsReport::compute(&p, &x, &y);
        assert_eq!(report.moment_xy, ratio(3, 10));
        assert_eq!(report.moment_yx, ratio(3, 10));
        assert_eq!(report.cov_xy, ratio(-2, 5));
        assert!(report.matrix.is_symmetric());
        assert!(!report.compatible);
        assert_eq!(
            report.joint_xy,
            JointDistribution {
                row_values: vec![int(-1), int(1)],
                col_values: vec![int(0), int(5)],
                table: vec![vec![ratio(2, 25), ratio(8, 25)], vec![ratio(11, 50), ratio(19, 50)]],
            }
        );
    }

    #[test]
    fn classical_representation_of_example() {
        let l = mo2();
        let p = example_21(&l);
        let (x, y) = xy(&l);
        let rep = classical_representation(&p, &x, &y);
        assert_eq!(rep.first.mean_xi(), ratio(1, 5));
        assert_eq!(rep.first.mean_eta(), ratio(7, 2));
        assert_eq!(rep.first.cov(), int(0));
        assert_eq!(rep.second.cov(), ratio(-2, 5));
        let c = covariance(&p, &y, &x);
        assert_eq!(&c * &c, ratio(4, 25));
        assert!(&c * &c <= variance(&p, &x) * variance(&p, &y));
        assert!(verify_classical(&p, &x, &y, &rep).is_empty());

        let diag = classical_representation(&p, &x, &x);
        assert!(diag.first.outcomes.iter().all(|(u, v, w)| u == v || w.is_zero()));
        assert_eq!(diag.first.cov(), variance(&p, &x));
    }

    #[test]
    fn centered_moment_identity() {
        let l = mo2();
        let p = example_21(&l);
        let (x, y) = xy(&l);
        let (nx, ny) = (mean(&p, &x), mean(&p, &y));
        let gx = x.compose(|t| t - &nx);
        let gy = y.compose(|t| t - &ny);
        assert_eq!(first_joint_moment(&p, &gx, &gy), covariance(&p, &x, &y));
        assert_eq!(first_joint_moment(&p, &gy, &gx), covariance(&p, &y, &x));
    }

    #[test]
    fn range_of_observable() {
        let l = mo2();
        let (x, _) = xy(&l);
        let e = |n| l.element(n).unwrap();
        let mut want = vec![l.zero(), l.one(), e("a"), e("a'")];
        want.sort();
        assert_eq!(x.range(), want);
    }
}
