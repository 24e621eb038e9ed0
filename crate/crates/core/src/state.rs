//! States, conditional systems and conditional states.
//!
//! A [`ConditionalState`] is a map `f(b, a)` defined for every element `b` and
//! every member `a` of a [`ConditionalSystem`]. It is validated against three
//! conditions: every column `f(·, a)` is a state (C1), `f(a, a) = 1` (C2), and
//! for every family of mutually orthogonal members whose join `j` is again a
//! member, `f(b, j) = Σ f(aₙ, j)·f(b, aₙ)` for all `b` (C3).

use crate::lattice::{Element, ElementSet, QuantumLogic};
use crate::rational::{self, Rational};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;
use thiserror::Error;

/// Largest orthogonal family enumerated when checking C3.
pub const C3_FAMILY_CAP: usize = 8;

/// Largest partition accepted by [`ConditionalState::from_partition`].
pub const MAX_PARTS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("expected {expected} values, got {got}")]
    ValueCount { expected: usize, got: usize },
    #[error("value {value} at `{element}` is outside [0, 1]")]
    OutOfRange { element: String, value: String },
    #[error("bounds violated: m(0) = {m0}, m(1) = {m1}")]
    BoundsViolation { m0: String, m1: String },
    #[error("additivity fails for orthogonal `{a}`, `{b}`: m({a} ∨ {b}) = {joined} but m({a}) + m({b}) = {sum}")]
    AdditivityViolation {
        a: String,
        b: String,
        joined: String,
        sum: String,
    },
    #[error("`0` cannot seed a conditional system")]
    ZeroInSeed,
    #[error("not a conditional system: `{0}` is required by closure but missing")]
    NotClosed(String),
    #[error("`{0}` is not a member of the conditional system")]
    NotInSystem(String),
    #[error("no conditioning column for member `{0}`")]
    MissingColumn(String),
    #[error("(C1) f(·, {a}) is not a state: {source}")]
    C1Violation {
        a: String,
        #[source]
        source: Box<StateError>,
    },
    #[error("(C2) f({0}, {0}) ≠ 1")]
    C2Violation(String),
    #[error("(C3) fails for family {{{}}} at `{b}`: f(b, ∨) = {lhs} but the weighted sum is {rhs}", .family.join(", "))]
    C3Violation {
        family: Vec<String>,
        b: String,
        lhs: String,
        rhs: String,
    },
    #[error("parts {0} and {1} are not orthogonal")]
    NotOrthogonal(usize, usize),
    #[error("part {0} is the zero element")]
    ZeroPart(usize),
    #[error("state {0} does not assign 1 to its part")]
    AlphaNotConcentrated(usize),
    #[error("invalid weights: {0}")]
    WeightsInvalid(String),
    #[error("member `{0}` is not a join of partition blocks")]
    UnreachableMember(String),
    #[error("precondition f({c}, {a}) = 1 fails")]
    PreconditionFailed { c: String, a: String },
}

/// Finitely additive normalized measure on a logic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    logic: Arc<QuantumLogic>,
    values: Vec<Rational>,
}

impl State {
    /// Checks `m(0) = 0`, `m(1) = 1`, the unit range, and additivity over every
    /// orthogonal pair.
    pub fn validate(logic: &Arc<QuantumLogic>, values: Vec<Rational>) -> Result<Self, StateError> {
        check_state(logic, &values)?;
        Ok(State {
            logic: logic.clone(),
            values,
        })
    }

    pub fn logic(&self) -> &Arc<QuantumLogic> {
        &self.logic
    }

    pub fn value(&self, e: Element) -> &Rational {
        &self.values[e.0]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

fn check_state(logic: &QuantumLogic, values: &[Rational]) -> Result<(), StateError> {
    if values.len() != logic.len() {
        return Err(StateError::ValueCount {
            expected: logic.len(),
            got: values.len(),
        });
    }
    for e in logic.elements() {
        if !rational::in_unit_interval(&values[e.0]) {
            return Err(StateError::OutOfRange {
                element: logic.name(e).to_string(),
                value: rational::fraction(&values[e.0]),
            });
        }
    }
    let (m0, m1) = (&values[logic.zero().0], &values[logic.one().0]);
    if !m0.is_zero() || !m1.is_one() {
        return Err(StateError::BoundsViolation {
            m0: rational::fraction(m0),
            m1: rational::fraction(m1),
        });
    }
    for a in logic.elements() {
        for b in logic.elements().skip(a.0) {
            if !logic.is_orthogonal(a, b) {
                continue;
            }
            let joined = &values[logic.join(a, b).0];
            let sum = &values[a.0] + &values[b.0];
            if *joined != sum {
                return Err(StateError::AdditivityViolation {
                    a: logic.name(a).to_string(),
                    b: logic.name(b).to_string(),
                    joined: rational::fraction(joined),
                    sum: rational::fraction(&sum),
                });
            }
        }
    }
    Ok(())
}

/// Subset of nonzero elements closed under joins and under relative
/// complements `a⊥ ∧ b` of comparable members `a < b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalSystem {
    logic: Arc<QuantumLogic>,
    members: ElementSet,
}

impl ConditionalSystem {
    /// Smallest conditional system containing `seed`.
    pub fn generated(logic: &Arc<QuantumLogic>, seed: ElementSet) -> Result<Self, StateError> {
        if seed.contains(logic.zero()) {
            return Err(StateError::ZeroInSeed);
        }
        Ok(ConditionalSystem {
            logic: logic.clone(),
            members: closure(logic, seed),
        })
    }

    /// Accepts `members` only if it is already closed.
    pub fn new(logic: &Arc<QuantumLogic>, members: ElementSet) -> Result<Self, StateError> {
        if members.contains(logic.zero()) {
            return Err(StateError::ZeroInSeed);
        }
        let closed = closure(logic, members);
        if let Some(missing) = ElementSet(closed.0 & !members.0).iter().next() {
            return Err(StateError::NotClosed(logic.name(missing).to_string()));
        }
        Ok(ConditionalSystem {
            logic: logic.clone(),
            members,
        })
    }

    /// All nonzero elements.
    pub fn full(logic: &Arc<QuantumLogic>) -> Self {
        let mut members = logic.all();
        members.remove(logic.zero());
        ConditionalSystem {
            logic: logic.clone(),
            members,
        }
    }

    pub fn logic(&self) -> &Arc<QuantumLogic> {
        &self.logic
    }

    pub fn members(&self) -> ElementSet {
        self.members
    }

    pub fn contains(&self, e: Element) -> bool {
        self.members.contains(e)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Element> {
        self.members.iter()
    }
}

/// Least fixed point of the two closure rules. `0` can only enter through a
/// relative complement `a⊥ ∧ b` with `a < b`, which is nonzero by the
/// orthomodular law.
pub(crate) fn closure(logic: &QuantumLogic, seed: ElementSet) -> ElementSet {
    let mut set = seed;
    loop {
        let mut next = set;
        for a in set.iter() {
            for b in set.iter() {
                next.insert(logic.join(a, b));
                if logic.lt(a, b) {
                    next.insert(logic.meet(logic.complement(a), b));
                }
            }
        }
        if next == set {
            return set;
        }
        set = next;
    }
}

/// How much of the C3 family space was checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct C3Coverage {
    pub families_checked: usize,
    /// Set when some family of [`C3_FAMILY_CAP`] members had an orthogonal
    /// extension that was not enumerated.
    pub truncated: bool,
}

/// Validated conditional state `f: L × L_c → [0, 1]`.
#[derive(Debug, Clone)]
pub struct ConditionalState {
    logic: Arc<QuantumLogic>,
    cs: ConditionalSystem,
    // columns[a] = f(·, a) for a ∈ cs
    columns: Vec<Option<Vec<Rational>>>,
    coverage: C3Coverage,
}

impl PartialEq for ConditionalState {
    fn eq(&self, other: &Self) -> bool {
        self.logic == other.logic && self.cs == other.cs && self.columns == other.columns
    }
}

impl ConditionalState {
    /// Validates C1–C3. `columns` maps each member `a` of `cs` to `f(·, a)`.
    pub fn validate(cs: &ConditionalSystem, columns: BTreeMap<Element, Vec<Rational>>) -> Result<Self, StateError> {
        let logic = cs.logic().clone();
        let mut table: Vec<Option<Vec<Rational>>> = vec![None; logic.len()];
        for (a, col) in columns {
            if !cs.contains(a) {
                return Err(StateError::NotInSystem(logic.name(a).to_string()));
            }
            table[a.0] = Some(col);
        }
        for a in cs.iter() {
            let col = table[a.0]
                .as_ref()
                .ok_or_else(|| StateError::MissingColumn(logic.name(a).to_string()))?;
            check_state(&logic, col).map_err(|e| StateError::C1Violation {
                a: logic.name(a).to_string(),
                source: Box::new(e),
            })?;
        }
        for a in cs.iter() {
            if !table[a.0].as_ref().unwrap()[a.0].is_one() {
                return Err(StateError::C2Violation(logic.name(a).to_string()));
            }
        }
        let coverage = check_c3(&logic, cs, &table)?;
        Ok(ConditionalState {
            logic,
            cs: cs.clone(),
            columns: table,
            coverage,
        })
    }

    /// Conditional state built from mutually orthogonal `parts`, a state
    /// `alphas[i]` concentrated on each part, and strictly positive weights
    /// `k` summing to 1. On the generated system,
    /// `f(d, ∨_{i∈S} aᵢ) = Σ_{i∈S} kᵢ/(Σ_{j∈S} kⱼ)·αᵢ(d)`.
    pub fn from_partition(
        logic: &Arc<QuantumLogic>,
        parts: &[Element],
        alphas: &[State],
        k: &[Rational],
    ) -> Result<Self, StateError> {
        let n = parts.len();
        if n == 0 || alphas.len() != n || k.len() != n {
            return Err(StateError::WeightsInvalid(format!(
                "{n} parts, {} states, {} weights",
                alphas.len(),
                k.len()
            )));
        }
        if n > MAX_PARTS {
            return Err(StateError::WeightsInvalid(format!(
                "at most {MAX_PARTS} parts supported"
            )));
        }
        for (i, &p) in parts.iter().enumerate() {
            if p == logic.zero() {
                return Err(StateError::ZeroPart(i));
            }
            for (j, &q) in parts.iter().enumerate().skip(i + 1) {
                if !logic.is_orthogonal(p, q) {
                    return Err(StateError::NotOrthogonal(i, j));
                }
            }
        }
        for (i, alpha) in alphas.iter().enumerate() {
            if !alpha.value(parts[i]).is_one() {
                return Err(StateError::AlphaNotConcentrated(i));
            }
        }
        if let Some(i) = k.iter().position(|w| !(w > &Rational::zero())) {
            return Err(StateError::WeightsInvalid(format!("weight {i} is not positive")));
        }
        let total: Rational = k.iter().sum();
        if !total.is_one() {
            return Err(StateError::WeightsInvalid(format!(
                "weights sum to {}",
                rational::fraction(&total)
            )));
        }

        let cs = ConditionalSystem::generated(logic, parts.iter().copied().collect())?;
        let mut block_of: HashMap<Element, u32> = HashMap::new();
        for mask in 1u32..(1 << n) {
            let joined = logic.join_all((0..n).filter(|i| mask >> i & 1 == 1).map(|i| parts[i]));
            block_of.entry(joined).or_insert(mask);
        }
        let mut columns = BTreeMap::new();
        for c in cs.iter() {
            let mask = *block_of
                .get(&c)
                .ok_or_else(|| StateError::UnreachableMember(logic.name(c).to_string()))?;
            let chosen: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let weight: Rational = chosen.iter().map(|&i| &k[i]).sum();
            let col = logic
                .elements()
                .map(|d| chosen.iter().map(|&i| &k[i] * alphas[i].value(d)).sum::<Rational>() / &weight)
                .collect();
            columns.insert(c, col);
        }
        ConditionalState::validate(&cs, columns)
    }

    pub fn logic(&self) -> &Arc<QuantumLogic> {
        &self.logic
    }

    pub fn system(&self) -> &ConditionalSystem {
        &self.cs
    }

    pub fn coverage(&self) -> C3Coverage {
        self.coverage
    }

    /// `f(b, a)`, or `None` when `a` is not a member of the system.
    pub fn get(&self, b: Element, a: Element) -> Option<&Rational> {
        self.columns[a.0].as_ref().map(|col| &col[b.0])
    }

    /// `f(b, a)`; panics if `a` is outside the system.
    pub fn value(&self, b: Element, a: Element) -> &Rational {
        self.get(b, a)
            .unwrap_or_else(|| panic!("`{}` is not a conditioning member", self.logic.name(a)))
    }

    /// The state `f(·, a)`.
    pub fn column(&self, a: Element) -> Option<State> {
        self.columns[a.0].as_ref().map(|col| State {
            logic: self.logic.clone(),
            values: col.clone(),
        })
    }

    /// Whether `b` is independent of `a` with respect to the state `f(·, c)`,
    /// i.e. `f(b, c) = f(b, a)`. Requires `f(c, a) = 1`.
    pub fn is_independent(&self, b: Element, a: Element, c: Element) -> Result<bool, StateError> {
        for m in [a, c] {
            if !self.cs.contains(m) {
                return Err(StateError::NotInSystem(self.logic.name(m).to_string()));
            }
        }
        if !self.value(c, a).is_one() {
            return Err(StateError::PreconditionFailed {
                c: self.logic.name(c).to_string(),
                a: self.logic.name(a).to_string(),
            });
        }
        Ok(self.value(b, c) == self.value(b, a))
    }
}

fn check_c3(
    logic: &QuantumLogic,
    cs: &ConditionalSystem,
    table: &[Option<Vec<Rational>>],
) -> Result<C3Coverage, StateError> {
    let members: Vec<Element> = cs.iter().collect();
    let mut coverage = C3Coverage::default();
    let mut family = Vec::with_capacity(C3_FAMILY_CAP);
    c3_search(logic, cs, table, &members, 0, &mut family, &mut coverage)?;
    Ok(coverage)
}

fn c3_search(
    logic: &QuantumLogic,
    cs: &ConditionalSystem,
    table: &[Option<Vec<Rational>>],
    members: &[Element],
    start: usize,
    family: &mut Vec<Element>,
    coverage: &mut C3Coverage,
) -> Result<(), StateError> {
    for i in start..members.len() {
        let m = members[i];
        if !family.iter().all(|&f| logic.is_orthogonal(f, m)) {
            continue;
        }
        if family.len() == C3_FAMILY_CAP {
            coverage.truncated = true;
            return Ok(());
        }
        family.push(m);
        if family.len() >= 2 {
            check_family(logic, cs, table, family)?;
            coverage.families_checked += 1;
        }
        c3_search(logic, cs, table, members, i + 1, family, coverage)?;
        family.pop();
    }
    Ok(())
}

fn check_family(
    logic: &QuantumLogic,
    cs: &ConditionalSystem,
    table: &[Option<Vec<Rational>>],
    family: &[Element],
) -> Result<(), StateError> {
    let joined = logic.join_all(family.iter().copied());
    if !cs.contains(joined) {
        return Ok(());
    }
    let col = |a: Element| table[a.0].as_ref().unwrap();
    let top = col(joined);
    for b in logic.elements() {
        let rhs: Rational = family.iter().map(|&a| &top[a.0] * &col(a)[b.0]).sum();
        if top[b.0] != rhs {
            return Err(StateError::C3Violation {
                family: family.iter().map(|&a| logic.name(a).to_string()).collect(),
                b: logic.name(b).to_string(),
                lhs: rational::fraction(&top[b.0]),
                rhs: rational::fraction(&rhs),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn mo2() -> Arc<QuantumLogic> {
        Arc::new(QuantumLogic::build(&["0", "1", "a", "a'", "b", "b'"], &[], &[("a", "a'"), ("b", "b'")]).unwrap())
    }

    fn set(l: &QuantumLogic, names: &[&str]) -> ElementSet {
        names.iter().map(|n| l.element(n).unwrap()).collect()
    }

    fn state(l: &Arc<QuantumLogic>, pairs: &[(&str, Rational)]) -> Result<State, StateError> {
        let mut v = vec![Rational::zero(); l.len()];
        v[l.one().0] = Rational::one();
        for (n, q) in pairs {
            v[l.element(n).unwrap().0] = q.clone();
        }
        State::validate(l, v)
    }

    /// The conditional-state table of the six-element example, cs = L \ {0}.
    fn example_columns(l: &QuantumLogic) -> BTreeMap<Element, Vec<Rational>> {
        let rows = ["a", "a'", "b", "b'"];
        let cols: [(&str, [Rational; 4]); 5] = [
            ("a", [int(1), int(0), ratio(1, 5), ratio(4, 5)]),
            ("a'", [int(0), int(1), ratio(11, 30), ratio(19, 30)]),
            ("b", [ratio(2, 5), ratio(3, 5), int(1), int(0)]),
            ("b'", [ratio(2, 5), ratio(3, 5), int(0), int(1)]),
            ("1", [ratio(2, 5), ratio(3, 5), ratio(3, 10), ratio(7, 10)]),
        ];
        cols.iter()
            .map(|(c, vals)| {
                let mut col = vec![Rational::zero(); l.len()];
                col[l.one().0] = Rational::one();
                for (r, v) in rows.iter().zip(vals.iter()) {
                    col[l.element(r).unwrap().0] = v.clone();
                }
                (l.element(c).unwrap(), col)
            })
            .collect()
    }

    #[test]
    fn diagonal_state_of_example_is_valid() {
        let l = mo2();
        let s = state(
            &l,
            &[
                ("a", ratio(2, 5)),
                ("a'", ratio(3, 5)),
                ("b", ratio(3, 10)),
                ("b'", ratio(7, 10)),
            ],
        )
        .unwrap();
        assert_eq!(s.value(l.element("b").unwrap()), &ratio(3, 10));
    }

    #[test]
    fn constant_one_is_not_additive() {
        let l = mo2();
        let v: Vec<Rational> = l
            .elements()
            .map(|e| if e == l.zero() { int(0) } else { int(1) })
            .collect();
        assert!(matches!(
            State::validate(&l, v),
            Err(StateError::AdditivityViolation { .. })
        ));
    }

    #[test]
    fn bounds_and_range_errors() {
        let l = mo2();
        let v = vec![int(0); l.len()];
        assert!(matches!(
            State::validate(&l, v),
            Err(StateError::BoundsViolation { .. })
        ));
        let err = state(&l, &[("a", ratio(3, 2)), ("a'", ratio(-1, 2))]).unwrap_err();
        assert!(matches!(err, StateError::OutOfRange { .. }));
        assert!(matches!(
            State::validate(&l, vec![int(0)]),
            Err(StateError::ValueCount { expected: 6, got: 1 })
        ));
    }

    #[test]
    fn generated_systems() {
        let l = mo2();
        let cs = ConditionalSystem::generated(&l, set(&l, &["a", "a'"])).unwrap();
        assert_eq!(cs.members(), set(&l, &["a", "a'", "1"]));
        let cs = ConditionalSystem::generated(&l, set(&l, &["1"])).unwrap();
        assert_eq!(cs.members(), set(&l, &["1"]));
        assert_eq!(
            ConditionalSystem::generated(&l, set(&l, &["0", "a"])).unwrap_err(),
            StateError::ZeroInSeed
        );
        // a < 1 forces a'
        assert_eq!(
            ConditionalSystem::new(&l, set(&l, &["a", "1"])).unwrap_err(),
            StateError::NotClosed("a'".into())
        );
    }

    #[test]
    fn example_table_is_a_conditional_state() {
        let l = mo2();
        let cs = ConditionalSystem::full(&l);
        let f = ConditionalState::validate(&cs, example_columns(&l)).unwrap();
        let e = |n| l.element(n).unwrap();
        let weighted =
            f.value(e("a"), l.one()) * f.value(e("b"), e("a")) + f.value(e("a'"), l.one()) * f.value(e("b"), e("a'"));
        assert_eq!(weighted, ratio(3, 10));
        assert_eq!(f.value(e("b"), e("b")), &int(1));
        assert!(!f.coverage().truncated);
        assert!(f.coverage().families_checked >= 2);
    }

    #[test]
    fn perturbed_example_fails_c3() {
        let l = mo2();
        let e = |n| l.element(n).unwrap();
        let mut cols = example_columns(&l);
        // keep f(·, a) a state so that only C3 can catch it
        let col = cols.get_mut(&e("a")).unwrap();
        col[e("b").0] = ratio(1, 4);
        col[e("b'").0] = ratio(3, 4);
        let err = ConditionalState::validate(&ConditionalSystem::full(&l), cols).unwrap_err();
        match err {
            StateError::C3Violation { family, b, lhs, rhs } => {
                assert_eq!(family, vec!["a", "a'"]);
                assert_eq!(b, "b");
                assert_eq!(lhs, "3/10");
                assert_eq!(rhs, "8/25");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn single_entry_perturbation_fails_c1() {
        let l = mo2();
        let e = |n| l.element(n).unwrap();
        let mut cols = example_columns(&l);
        cols.get_mut(&e("a")).unwrap()[e("b").0] = ratio(1, 4);
        let err = ConditionalState::validate(&ConditionalSystem::full(&l), cols).unwrap_err();
        assert!(matches!(err, StateError::C1Violation { ref a, .. } if a == "a"));
    }

    #[test]
    fn c2_violation() {
        let l = mo2();
        let e = |n| l.element(n).unwrap();
        let mut cols = example_columns(&l);
        // f(·, b) replaced by the state of column 1, a valid state with f(b, b) ≠ 1
        let top = cols[&l.one()].clone();
        cols.insert(e("b"), top);
        let err = ConditionalState::validate(&ConditionalSystem::full(&l), cols).unwrap_err();
        assert_eq!(err, StateError::C2Violation("b".into()));
    }

    #[test]
    fn missing_and_foreign_columns() {
        let l = mo2();
        let e = |n| l.element(n).unwrap();
        let mut cols = example_columns(&l);
        cols.remove(&e("b"));
        let err = ConditionalState::validate(&ConditionalSystem::full(&l), cols).unwrap_err();
        assert_eq!(err, StateError::MissingColumn("b".into()));

        let cs = ConditionalSystem::generated(&l, set(&l, &["1"])).unwrap();
        let err = ConditionalState::validate(&cs, example_columns(&l)).unwrap_err();
        assert!(matches!(err, StateError::NotInSystem(_)));
    }

    #[test]
    fn partition_reproduces_example_column() {
        let l = mo2();
        let e = |n| l.element(n).unwrap();
        let a1 = state(&l, &[("a", int(1)), ("b", ratio(1, 5)), ("b'", ratio(4, 5))]).unwrap();
        let a2 = state(&l, &[("a'", int(1)), ("b", ratio(11, 30)), ("b'", ratio(19, 30))]).unwrap();
        let f =
            ConditionalState::from_partition(&l, &[e("a"), e("a'")], &[a1.clone(), a2], &[ratio(2, 5), ratio(3, 5)])
                .unwrap();
        assert_eq!(f.value(e("b"), l.one()), &ratio(3, 10));
        assert_eq!(f.value(e("b'"), l.one()), &ratio(7, 10));
        assert_eq!(f.value(e("a"), l.one()), &ratio(2, 5));
        assert_eq!(f.column(e("a")).unwrap(), a1);
        assert_eq!(f.system().members(), set(&l, &["a", "a'", "1"]));
    }

    #[test]
    fn single_part_partition() {
        let l = mo2();
        let alpha = state(
            &l,
            &[
                ("a", ratio(1, 3)),
                ("a'", ratio(2, 3)),
                ("b", ratio(1, 7)),
                ("b'", ratio(6, 7)),
            ],
        )
        .unwrap();
        let f = ConditionalState::from_partition(&l, &[l.one()], std::slice::from_ref(&alpha), &[int(1)]).unwrap();
        assert_eq!(f.column(l.one()).unwrap(), alpha);
    }

    #[test]
    fn partition_errors() {
        let l = mo2();
        let e = |n| l.element(n).unwrap();
        let pa = state(&l, &[("a", int(1)), ("b", ratio(1, 2)), ("b'", ratio(1, 2))]).unwrap();
        let pb = state(&l, &[("b", int(1)), ("a", ratio(1, 2)), ("a'", ratio(1, 2))]).unwrap();
        let half = [ratio(1, 2), ratio(1, 2)];
        assert_eq!(
            ConditionalState::from_partition(&l, &[e("a"), e("b")], &[pa.clone(), pb.clone()], &half).unwrap_err(),
            StateError::NotOrthogonal(0, 1)
        );
        assert_eq!(
            ConditionalState::from_partition(&l, &[e("a"), e("a'")], &[pa.clone(), pb.clone()], &half).unwrap_err(),
            StateError::AlphaNotConcentrated(1)
        );
        let pac = state(&l, &[("a'", int(1)), ("b", ratio(1, 2)), ("b'", ratio(1, 2))]).unwrap();
        for k in [[int(1), int(0)], [ratio(1, 2), ratio(1, 3)]] {
            assert!(matches!(
                ConditionalState::from_partition(&l, &[e("a"), e("a'")], &[pa.clone(), pac.clone()], &k).unwrap_err(),
                StateError::WeightsInvalid(_)
            ));
        }
        assert_eq!(
            ConditionalState::from_partition(&l, &[l.zero()], &[pa], &[int(1)]).unwrap_err(),
            StateError::ZeroPart(0)
        );
    }

    #[test]
    fn independence_examples() {
        let l = mo2();
        let e = |n| l.element(n).unwrap();
        let f = ConditionalState::validate(&ConditionalSystem::full(&l), example_columns(&l)).unwrap();
        let one = l.one();
        assert!(f.is_independent(e("a"), e("b"), one).unwrap());
        assert!(!f.is_independent(e("b"), e("a"), one).unwrap());
        for a in l.nonzero() {
            assert!(f.is_independent(one, a, one).unwrap());
        }
        assert!(matches!(
            f.is_independent(e("a"), e("a"), e("b")),
            Err(StateError::PreconditionFailed { .. })
        ));
        assert!(matches!(
            f.is_independent(e("a"), l.zero(), one),
            Err(StateError::NotInSystem(_))
        ));
    }
}
