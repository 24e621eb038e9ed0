//! Exhaustive property checks over finite models. Each check returns the
//! list of counterexamples it found; an empty list means the property holds.
//!
//! These are the executable forms of the structural facts the rest of the
//! crate relies on: lattice identities, s-map properties, the roundtrip
//! between s-maps and conditional states, independence, and the classical
//! representation of covariance.

use crate::generate::{brute_force_compatible, GenError, HorizontalSum};
use crate::lattice::{Element, QuantumLogic};
use crate::observable::{
    self, classical_representation, correlation, covariance, first_joint_moment, mean, verify_classical,
    DiscreteObservable,
};
use crate::rational;
use crate::smap::SMap;
use crate::state::ConditionalState;
use num_traits::One;

/// Tolerance on the floating correlation coefficient.
pub const CORRELATION_TOLERANCE: f64 = 1e-9;

/// `is_compatible` against the witness search, on every pair.
pub fn compatibility_oracle(logic: &QuantumLogic) -> Result<Vec<String>, GenError> {
    let mut out = Vec::new();
    for a in logic.elements() {
        for b in logic.elements() {
            let fast = logic.is_compatible(a, b);
            let slow = brute_force_compatible(logic, a, b)?;
            if fast != slow {
                out.push(format!(
                    "compatibility of `{}`, `{}`: identity says {fast}, witness search says {slow}",
                    logic.name(a),
                    logic.name(b)
                ));
            }
        }
    }
    Ok(out)
}

/// Orthogonality is symmetric and implies compatibility; De Morgan; the
/// orthomodular law on every comparable pair.
pub fn lattice_identities(logic: &QuantumLogic) -> Vec<String> {
    let mut out = Vec::new();
    let n = |e: Element| logic.name(e).to_string();
    for a in logic.elements() {
        for b in logic.elements() {
            if logic.is_orthogonal(a, b) != logic.is_orthogonal(b, a) {
                out.push(format!("orthogonality not symmetric at `{}`, `{}`", n(a), n(b)));
            }
            if logic.is_orthogonal(a, b) && !logic.is_compatible(a, b) {
                out.push(format!("orthogonal but incompatible: `{}`, `{}`", n(a), n(b)));
            }
            let lhs = logic.complement(logic.join(a, b));
            let rhs = logic.meet(logic.complement(a), logic.complement(b));
            if lhs != rhs {
                out.push(format!("De Morgan fails at `{}`, `{}`", n(a), n(b)));
            }
            if logic.leq(a, b) && logic.join(a, logic.meet(logic.complement(a), b)) != b {
                out.push(format!("orthomodular law fails at `{}` ≤ `{}`", n(a), n(b)));
            }
        }
    }
    out
}

/// If `b ↔ aᵢ` for every member of a family, then `b ∧ ∨aᵢ = ∨(aᵢ ∧ b)`.
/// Every subset of the elements compatible with `b` is tried; logics with
/// more than 16 elements are skipped.
pub fn compatible_distributivity(logic: &QuantumLogic) -> Vec<String> {
    let mut out = Vec::new();
    if logic.len() > 16 {
        return out;
    }
    for b in logic.elements() {
        let compatible: Vec<Element> = logic.elements().filter(|&a| logic.is_compatible(a, b)).collect();
        for mask in 1u32..(1 << compatible.len()) {
            let family = (0..compatible.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| compatible[i]);
            let joined = logic.join_all(family.clone());
            let lhs = logic.meet(b, joined);
            let rhs = logic.join_all(family.clone().map(|a| logic.meet(a, b)));
            if lhs != rhs || !logic.is_compatible(b, joined) {
                let names: Vec<&str> = family.map(|a| logic.name(a)).collect();
                out.push(format!(
                    "distributivity fails for `{}` over {{{}}}",
                    logic.name(b),
                    names.join(", ")
                ));
            }
        }
    }
    out
}

/// The five derived s-map properties: compatible pairs are symmetric and
/// equal the mass of their meet; `a ≤ b` gives `p(a, b) = p(a, a)` and
/// monotonicity in the first argument; `p(a, b) ≤ p(b, b)`; the diagonal is a
/// state. Also the marginal law over every complementary pair.
pub fn smap_properties(p: &SMap) -> Vec<String> {
    let logic = p.logic();
    let mut out = Vec::new();
    let n = |e: Element| logic.name(e).to_string();
    for a in logic.elements() {
        for b in logic.elements() {
            if logic.is_compatible(a, b) {
                let m = logic.meet(a, b);
                if p.value(a, b) != p.value(m, m) || p.value(a, b) != p.value(b, a) {
                    out.push(format!(
                        "compatible `{}`, `{}`: p(a,b), p(a∧b,a∧b), p(b,a) differ",
                        n(a),
                        n(b)
                    ));
                }
            }
            if logic.leq(a, b) {
                if p.value(a, b) != p.value(a, a) {
                    out.push(format!("`{}` ≤ `{}` but p(a,b) ≠ p(a,a)", n(a), n(b)));
                }
                for c in logic.elements() {
                    if p.value(a, c) > p.value(b, c) {
                        out.push(format!("`{}` ≤ `{}` but p(a,{}) > p(b,{})", n(a), n(b), n(c), n(c)));
                    }
                }
            }
            if p.value(a, b) > p.value(b, b) {
                out.push(format!("p({}, {}) > p({}, {})", n(a), n(b), n(b), n(b)));
            }
        }
        let ac = logic.complement(a);
        for c in logic.elements() {
            let nu = p.value(c, c);
            if &(p.value(c, a) + p.value(c, ac)) != nu || &(p.value(a, c) + p.value(ac, c)) != nu {
                out.push(format!("marginal law fails for `{}` against `{}`", n(c), n(a)));
            }
        }
    }
    let diag: Vec<_> = logic.elements().map(|b| p.value(b, b).clone()).collect();
    if let Err(e) = crate::state::State::validate(logic, diag) {
        out.push(format!("diagonal is not a state: {e}"));
    }
    out
}

/// `p → f_p → p_{f_p}` is the identity, and `f_p → p_{f_p} → f` recovers `f_p`.
pub fn roundtrip(p: &SMap) -> Vec<String> {
    let f = match p.to_conditional() {
        Ok(f) => f,
        Err(e) => return vec![format!("s-map to conditional state failed: {e}")],
    };
    let back = match SMap::from_conditional(&f) {
        Ok(q) => q,
        Err(e) => return vec![format!("conditional state to s-map failed: {e}")],
    };
    let mut out = Vec::new();
    if &back != p {
        out.push("s-map roundtrip changed the table".to_string());
    }
    match back.to_conditional() {
        Ok(f2) if f2 == f => {}
        Ok(_) => out.push("conditional roundtrip changed the table".to_string()),
        Err(e) => out.push(format!("second conversion failed: {e}")),
    }
    out
}

/// `f ↦ p_f ↦ f_{p_f}` agrees with `f` wherever `f(b, 1) > 0`.
pub fn conditional_roundtrip(f: &ConditionalState) -> Vec<String> {
    let logic = f.logic();
    let p = match SMap::from_conditional(f) {
        Ok(p) => p,
        Err(e) => return vec![format!("conditional state to s-map failed: {e}")],
    };
    let g = match p.to_conditional() {
        Ok(g) => g,
        Err(e) => return vec![format!("s-map to conditional state failed: {e}")],
    };
    let mut out = Vec::new();
    for b in g.system().iter() {
        for a in logic.elements() {
            if f.get(a, b) != g.get(a, b) {
                out.push(format!("f({}, {}) not recovered", logic.name(a), logic.name(b)));
            }
        }
    }
    out
}

/// Independence of `b` from `a` under `f_p(·, 1)` agrees with the product
/// rule `p(b, a) = p(a, a)·p(b, b)` on every pair.
pub fn independence_factorization(p: &SMap, f: &ConditionalState) -> Vec<String> {
    let logic = p.logic();
    let one = logic.one();
    let mut out = Vec::new();
    for a in f.system().iter() {
        for b in logic.elements() {
            match f.is_independent(b, a, one) {
                Ok(ind) if ind == p.is_independent_pair(b, a) => {}
                Ok(ind) => out.push(format!(
                    "`{}` vs `{}`: conditional says {ind}, product rule disagrees",
                    logic.name(b),
                    logic.name(a)
                )),
                Err(e) => out.push(e.to_string()),
            }
        }
    }
    out
}

/// The three properties of conditional independence over every admissible
/// triple: complement of the condition, complement of the event, and symmetry
/// for compatible events.
pub fn independence_properties(f: &ConditionalState) -> Vec<String> {
    let logic = f.logic();
    let cs = f.system();
    let n = |e: Element| logic.name(e).to_string();
    let ind = |b, a, c| f.is_independent(b, a, c).expect("precondition checked by caller");
    let mut out = Vec::new();
    for c in cs.iter() {
        for a in cs.iter() {
            if !f.value(c, a).is_one() {
                continue;
            }
            let ac = logic.complement(a);
            for b in logic.elements() {
                if cs.contains(ac) && f.value(c, ac).is_one() && ind(b, a, c) != ind(b, ac, c) {
                    out.push(format!("(i) fails: b={}, a={}, c={}", n(b), n(a), n(c)));
                }
                if ind(b, a, c) != ind(logic.complement(b), a, c) {
                    out.push(format!("(ii) fails: b={}, a={}, c={}", n(b), n(a), n(c)));
                }
                if cs.contains(b) && logic.is_compatible(a, b) && f.value(c, b).is_one() && ind(b, a, c) != ind(a, b, c)
                {
                    out.push(format!("(iii) fails: b={}, a={}, c={}", n(b), n(a), n(c)));
                }
            }
        }
    }
    out
}

/// Statistics identities for one ordered pair of observables: joint
/// distribution marginals, the classical representation, the centered-moment
/// identity, correlation bounds, and symmetry for compatible pairs.
pub fn observable_pair(p: &SMap, x: &DiscreteObservable, y: &DiscreteObservable) -> Vec<String> {
    let mut out = Vec::new();
    let joint = observable::joint_distribution(p, x, y);
    if !joint.total().is_one() {
        out.push("joint distribution does not sum to 1".to_string());
    }
    let rep = classical_representation(p, x, y);
    out.extend(verify_classical(p, x, y, &rep));

    let (nx, ny) = (mean(p, x), mean(p, y));
    let gx = x.compose(|t| t - &nx);
    let gy = y.compose(|t| t - &ny);
    for (label, lhs, rhs) in [
        ("c(x,y)", first_joint_moment(p, &gx, &gy), covariance(p, x, y)),
        ("c(y,x)", first_joint_moment(p, &gy, &gx), covariance(p, y, x)),
    ] {
        if lhs != rhs {
            out.push(format!(
                "centered moment {} ≠ {label} = {}",
                rational::fraction(&lhs),
                rational::fraction(&rhs)
            ));
        }
    }

    let (rxy, ryx) = (correlation(p, x, y).ok(), correlation(p, y, x).ok());
    for r in [rxy, ryx].into_iter().flatten() {
        if !(-1.0 - CORRELATION_TOLERANCE..=1.0 + CORRELATION_TOLERANCE).contains(&r) {
            out.push(format!("correlation {r} outside [-1, 1]"));
        }
    }
    if x.is_compatible_with(y) {
        if first_joint_moment(p, x, y) != first_joint_moment(p, y, x) {
            out.push("compatible observables with p(x,y) ≠ p(y,x)".to_string());
        }
        if covariance(p, x, y) != covariance(p, y, x) {
            out.push("compatible observables with c(x,y) ≠ c(y,x)".to_string());
        }
        if rxy != ryx {
            out.push("compatible observables with r(x,y) ≠ r(y,x)".to_string());
        }
    }
    out
}

/// Outcome of [`roundtrip_suite`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SuiteReport {
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    /// Trials whose s-map satisfied `p(a, b) = p(b, a)` everywhere.
    pub symmetric: usize,
    pub first_counterexample: Option<String>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Every check above applied to one random s-map.
pub fn trial_failures(hs: &HorizontalSum, seed: u64) -> Result<(SMap, Vec<String>), GenError> {
    let p = hs.random_smap(seed)?;
    let mut out = smap_properties(&p);
    out.extend(roundtrip(&p));
    if let Ok(f) = p.to_conditional() {
        out.extend(conditional_roundtrip(&f));
        out.extend(independence_factorization(&p, &f));
        out.extend(independence_properties(&f));
    }
    let observables = hs.random_block_observables(seed ^ 0x9e37_79b9_7f4a_7c15);
    for x in &observables {
        for y in &observables {
            out.extend(observable_pair(&p, x, y));
        }
    }
    Ok((p, out))
}

/// Runs `trials` seeded trials (seeds `seed, seed + 1, …`) and tallies them.
pub fn roundtrip_suite(hs: &HorizontalSum, trials: usize, seed: u64) -> Result<SuiteReport, GenError> {
    let mut report = SuiteReport {
        trials,
        ..SuiteReport::default()
    };
    for t in 0..trials {
        let trial_seed = seed.wrapping_add(t as u64);
        let (p, failures) = trial_failures(hs, trial_seed)?;
        if p.is_symmetric() {
            report.symmetric += 1;
        }
        if failures.is_empty() {
            report.passed += 1;
        } else {
            report.failed += 1;
            if report.first_counterexample.is_none() {
                report.first_counterexample = Some(format!("seed {trial_seed}: {}", failures[0]));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_suite_passes() {
        let hs = HorizontalSum::mo(2).unwrap();
        let r = roundtrip_suite(&hs, 0, 0).unwrap();
        assert_eq!(r, SuiteReport::default());
        assert!(r.all_passed());
    }

    #[test]
    fn small_suites() {
        let hs = HorizontalSum::mo(2).unwrap();
        let r = roundtrip_suite(&hs, 20, 11).unwrap();
        assert_eq!(r.passed, 20, "{:?}", r.first_counterexample);
        let hs = HorizontalSum::boolean(2).unwrap();
        let r = roundtrip_suite(&hs, 10, 1).unwrap();
        assert_eq!((r.passed, r.symmetric), (10, 10));
    }

    #[test]
    fn lattice_checks_on_families() {
        for hs in [
            HorizontalSum::boolean(3).unwrap(),
            HorizontalSum::mo(3).unwrap(),
            HorizontalSum::new(&[3, 2]).unwrap(),
        ] {
            assert!(lattice_identities(hs.logic()).is_empty());
            assert!(compatible_distributivity(hs.logic()).is_empty());
            assert!(compatibility_oracle(hs.logic()).unwrap().is_empty());
        }
    }

    #[test]
    fn random_smap_satisfies_properties() {
        let hs = HorizontalSum::mo(2).unwrap();
        let p = hs.random_smap(5).unwrap();
        assert!(smap_properties(&p).is_empty());
        assert!(roundtrip(&p).is_empty());
    }
}
