//! s-maps: two-argument maps `p(a, b)` that vanish on orthogonal pairs and are
//! additive over orthogonal joins in each argument, together with the two-way
//! conversion to conditional states.

use crate::lattice::{Element, ElementSet, QuantumLogic};
use crate::rational::{self, Rational};
use crate::state::{closure, ConditionalState, ConditionalSystem, State, StateError};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Which argument of `p` an additivity failure was found in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `p(a ∨ b, c) = p(a, c) + p(b, c)`
    First,
    /// `p(c, a ∨ b) = p(c, a) + p(c, b)`
    Second,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::First => "first argument",
            Side::Second => "second argument",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SMapError {
    #[error("expected {expected} values, got {got}")]
    ValueCount { expected: usize, got: usize },
    #[error("p({a}, {b}) = {value} is outside [0, 1]")]
    OutOfRange { a: String, b: String, value: String },
    #[error("(s1) p(1, 1) = {0}, expected 1")]
    S1Violation(String),
    #[error("(s2) `{a}` ⊥ `{b}` but p({a}, {b}) = {value}")]
    S2Violation { a: String, b: String, value: String },
    #[error(
        "(s3) additivity in the {side} fails for `{a}` ⊥ `{b}` at `{c}`: {} = {joined} but {} + {} = {sum}",
        pair(*.side, &format!("{} ∨ {}", .a, .b), .c), pair(*.side, .a, .c), pair(*.side, .b, .c)
    )]
    S3Violation {
        side: Side,
        a: String,
        b: String,
        c: String,
        joined: String,
        sum: String,
    },
    #[error("conditional state is not defined at nonzero `{0}`")]
    DomainTooSmall(String),
    #[error("conditioning on `{0}` is required by closure but p({0}, {0}) = 0")]
    ZeroMassConditioning(String),
    #[error(transparent)]
    State(#[from] StateError),
}

fn pair(side: Side, x: &str, c: &str) -> String {
    match side {
        Side::First => format!("p({x}, {c})"),
        Side::Second => format!("p({c}, {x})"),
    }
}

/// Validated s-map on a logic, stored as a full `n × n` table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SMap {
    logic: Arc<QuantumLogic>,
    values: Vec<Rational>,
}

impl SMap {
    /// Checks the unit range, (s1), (s2) over all orthogonal pairs, and (s3)
    /// over all orthogonal pairs and every third element in both arguments.
    /// `values[a * n + b] = p(a, b)`. The first failure in element-index order
    /// is reported.
    pub fn validate(logic: &Arc<QuantumLogic>, values: Vec<Rational>) -> Result<Self, SMapError> {
        let n = logic.len();
        if values.len() != n * n {
            return Err(SMapError::ValueCount {
                expected: n * n,
                got: values.len(),
            });
        }
        let at = |a: Element, b: Element| &values[a.0 * n + b.0];
        let name = |e: Element| logic.name(e).to_string();
        for a in logic.elements() {
            for b in logic.elements() {
                if !rational::in_unit_interval(at(a, b)) {
                    return Err(SMapError::OutOfRange {
                        a: name(a),
                        b: name(b),
                        value: rational::fraction(at(a, b)),
                    });
                }
            }
        }
        let top = at(logic.one(), logic.one());
        if !top.is_one() {
            return Err(SMapError::S1Violation(rational::fraction(top)));
        }
        for a in logic.elements() {
            for b in logic.elements() {
                if logic.is_orthogonal(a, b) && !at(a, b).is_zero() {
                    return Err(SMapError::S2Violation {
                        a: name(a),
                        b: name(b),
                        value: rational::fraction(at(a, b)),
                    });
                }
            }
        }
        for a in logic.elements() {
            for b in logic.elements().skip(a.0) {
                if !logic.is_orthogonal(a, b) {
                    continue;
                }
                let j = logic.join(a, b);
                for c in logic.elements() {
                    for side in [Side::First, Side::Second] {
                        let (joined, sum) = match side {
                            Side::First => (at(j, c), at(a, c) + at(b, c)),
                            Side::Second => (at(c, j), at(c, a) + at(c, b)),
                        };
                        if *joined != sum {
                            return Err(SMapError::S3Violation {
                                side,
                                a: name(a),
                                b: name(b),
                                c: name(c),
                                joined: rational::fraction(joined),
                                sum: rational::fraction(&sum),
                            });
                        }
                    }
                }
            }
        }
        Ok(SMap {
            logic: logic.clone(),
            values,
        })
    }

    pub fn logic(&self) -> &Arc<QuantumLogic> {
        &self.logic
    }

    pub fn value(&self, a: Element, b: Element) -> &Rational {
        &self.values[a.0 * self.logic.len() + b.0]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `ν(b) = p(b, b)`.
    pub fn diagonal(&self) -> State {
        let nu = self.logic.elements().map(|b| self.value(b, b).clone()).collect();
        State::validate(&self.logic, nu).expect("diagonal of a valid s-map is a state")
    }

    /// s-map induced by a conditional state defined on every nonzero element:
    /// `p(a, b) = f(a, b)·f(b, 1)` and `p(a, 0) = 0`.
    pub fn from_conditional(f: &ConditionalState) -> Result<Self, SMapError> {
        let logic = f.logic().clone();
        if let Some(missing) = logic.nonzero().find(|&e| !f.system().contains(e)) {
            return Err(SMapError::DomainTooSmall(logic.name(missing).to_string()));
        }
        let one = logic.one();
        let mut values = Vec::with_capacity(logic.len() * logic.len());
        for a in logic.elements() {
            for b in logic.elements() {
                values.push(if b == logic.zero() {
                    Rational::zero()
                } else {
                    f.value(a, b) * f.value(b, one)
                });
            }
        }
        SMap::validate(&logic, values)
    }

    /// Conditional state `f_p(a, b) = p(a, b) / p(b, b)` on the conditional
    /// system generated by the elements of positive diagonal mass.
    pub fn to_conditional(&self) -> Result<ConditionalState, SMapError> {
        let logic = &self.logic;
        let positive: ElementSet = logic
            .elements()
            .filter(|&b| self.value(b, b) > &Rational::zero())
            .collect();
        let closed = closure(logic, positive);
        if let Some(zero_mass) = ElementSet(closed.0 & !positive.0).iter().next() {
            return Err(SMapError::ZeroMassConditioning(logic.name(zero_mass).to_string()));
        }
        let cs = ConditionalSystem::new(logic, closed)?;
        let columns: BTreeMap<Element, Vec<Rational>> = cs
            .iter()
            .map(|b| {
                let mass = self.value(b, b);
                (b, logic.elements().map(|a| self.value(a, b) / mass).collect())
            })
            .collect();
        Ok(ConditionalState::validate(&cs, columns)?)
    }

    /// `p(b, a) = p(a, a)·p(b, b)`: `b` is independent of `a` under `f_p(·, 1)`.
    pub fn is_independent_pair(&self, b: Element, a: Element) -> bool {
        *self.value(b, a) == self.value(a, a) * self.value(b, b)
    }

    pub fn is_symmetric(&self) -> bool {
        self.logic
            .elements()
            .all(|a| self.logic.elements().all(|b| self.value(a, b) == self.value(b, a)))
    }
}

/// Fills unset entries involving the bounds: `p(0, ·) = p(·, 0) = 0`, then
/// `p(1, c)` and `p(c, 1)` through the first complementary pair `e, e⊥` that
/// is fully specified, then `p(1, 1)` likewise. Returns the first entry that
/// stays unset as `Err((a, b))`.
pub fn complete_bounds(
    logic: &QuantumLogic,
    mut entries: Vec<Option<Rational>>,
) -> Result<Vec<Rational>, (Element, Element)> {
    let n = logic.len();
    let (zero, one) = (logic.zero(), logic.one());
    let idx = |a: Element, b: Element| a.0 * n + b.0;
    for e in logic.elements() {
        for (a, b) in [(zero, e), (e, zero)] {
            if entries[idx(a, b)].is_none() {
                entries[idx(a, b)] = Some(Rational::zero());
            }
        }
    }
    let sum_over = |entries: &[Option<Rational>], row: bool, c: Element| -> Option<Rational> {
        logic.elements().filter(|&e| !logic.is_bound(e)).find_map(|e| {
            let ec = logic.complement(e);
            let (x, y) = if row {
                (entries[idx(e, c)].as_ref(), entries[idx(ec, c)].as_ref())
            } else {
                (entries[idx(c, e)].as_ref(), entries[idx(c, ec)].as_ref())
            };
            Some(x? + y?)
        })
    };
    for c in logic.elements().filter(|&c| c != one) {
        if entries[idx(one, c)].is_none() {
            entries[idx(one, c)] = sum_over(&entries, true, c);
        }
        if entries[idx(c, one)].is_none() {
            entries[idx(c, one)] = sum_over(&entries, false, c);
        }
    }
    if entries[idx(one, one)].is_none() {
        entries[idx(one, one)] = sum_over(&entries, true, one).or_else(|| {
            // {0, 1}: no decomposition of 1 exists
            (logic.len() == 2).then(Rational::one)
        });
    }
    entries
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or((Element(i / n), Element(i % n))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, parse, ratio};

    fn mo2() -> Arc<QuantumLogic> {
        Arc::new(QuantumLogic::build(&["0", "1", "a", "a'", "b", "b'"], &[], &[("a", "a'"), ("b", "b'")]).unwrap())
    }

    fn table(l: &QuantumLogic, rows: &[(&str, [&str; 4])]) -> Vec<Rational> {
        let cols = ["a", "a'", "b", "b'"];
        let n = l.len();
        let mut entries = vec![None; n * n];
        for (r, vals) in rows {
            for (c, v) in cols.iter().zip(vals) {
                let (a, b) = (l.element(r).unwrap(), l.element(c).unwrap());
                entries[a.0 * n + b.0] = Some(parse(v).unwrap());
            }
        }
        complete_bounds(l, entries).unwrap()
    }

    pub(crate) fn example_21(l: &QuantumLogic) -> Vec<Rational> {
        table(
            l,
            &[
                ("a", ["0.4", "0", "0.12", "0.28"]),
                ("a'", ["0", "0.6", "0.18", "0.42"]),
                ("b", ["0.08", "0.22", "0.3", "0"]),
                ("b'", ["0.32", "0.38", "0", "0.7"]),
            ],
        )
    }

    #[test]
    fn example_table_is_valid() {
        let l = mo2();
        let p = SMap::validate(&l, example_21(&l)).unwrap();
        let nu = p.diagonal();
        let e = |n| l.element(n).unwrap();
        assert_eq!(nu.value(e("a")), &ratio(2, 5));
        assert_eq!(nu.value(e("b")), &ratio(3, 10));
        assert_eq!(nu.value(l.one()), &int(1));
        assert_eq!(nu.value(l.zero()), &int(0));
        assert!(!p.is_symmetric());
    }

    #[test]
    fn unsymmetrized_second_table_fails_s3() {
        let l = mo2();
        let values = table(
            &l,
            &[
                ("a", ["0.4", "0", "0.08", "0.38"]),
                ("a'", ["0", "0.6", "0.22", "0.32"]),
                ("b", ["0.08", "0.22", "0.3", "0"]),
                ("b'", ["0.32", "0.38", "0", "0.7"]),
            ],
        );
        let err = SMap::validate(&l, values).unwrap_err();
        assert_eq!(
            err,
            SMapError::S3Violation {
                side: Side::Second,
                a: "b".into(),
                b: "b'".into(),
                c: "a".into(),
                joined: "2/5".into(),
                sum: "23/50".into(),
            }
        );
    }

    #[test]
    fn meet_of_a_boolean_state_is_an_smap() {
        let l = Arc::new(QuantumLogic::build(&["0", "1", "p", "q"], &[], &[("p", "q")]).unwrap());
        let m = [int(0), int(1), ratio(1, 3), ratio(2, 3)];
        let values = l
            .elements()
            .flat_map(|a| l.elements().map(move |b| (a, b)))
            .map(|(a, b)| m[l.meet(a, b).0].clone())
            .collect();
        let p = SMap::validate(&l, values).unwrap();
        assert!(p.is_symmetric());
    }

    #[test]
    fn s1_s2_and_range_errors() {
        let l = mo2();
        let e = |n| l.element(n).unwrap();
        let n = l.len();
        let mut v = example_21(&l);
        v[l.one().0 * n + l.one().0] = ratio(1, 2);
        assert_eq!(SMap::validate(&l, v).unwrap_err(), SMapError::S1Violation("1/2".into()));
        let mut v = example_21(&l);
        v[e("a").0 * n + e("a'").0] = ratio(1, 100);
        assert!(matches!(
            SMap::validate(&l, v).unwrap_err(),
            SMapError::S2Violation { .. }
        ));
        let mut v = example_21(&l);
        v[e("a").0 * n + e("b").0] = int(2);
        assert!(matches!(
            SMap::validate(&l, v).unwrap_err(),
            SMapError::OutOfRange { .. }
        ));
    }

    #[test]
    fn conversions_reproduce_example_tables() {
        let l = mo2();
        let e = |n| l.element(n).unwrap();
        let p = SMap::validate(&l, example_21(&l)).unwrap();
        let f = p.to_conditional().unwrap();
        assert_eq!(f.value(e("a"), e("b")), &ratio(2, 5));
        assert_eq!(f.value(e("b"), e("a'")), &ratio(11, 30));
        assert_eq!(f.value(e("b"), e("a")), &ratio(1, 5));
        for b in l.nonzero() {
            assert_eq!(f.value(b, b), &int(1));
        }
        let back = SMap::from_conditional(&f).unwrap();
        assert_eq!(back, p);
        assert_eq!(back.value(e("a"), e("b")), &ratio(3, 25));
        assert_eq!(back.value(e("b"), e("a")), &ratio(2, 25));
        assert_eq!(back.value(l.one(), l.one()), &int(1));
    }

    #[test]
    fn independence_pairs() {
        let l = mo2();
        let e = |n| l.element(n).unwrap();
        let p = SMap::validate(&l, example_21(&l)).unwrap();
        assert!(p.is_independent_pair(e("a"), e("b")));
        assert!(!p.is_independent_pair(e("b"), e("a")));
        for a in l.elements() {
            assert!(p.is_independent_pair(l.one(), a));
        }
    }

    #[test]
    fn from_conditional_needs_full_domain() {
        let l = mo2();
        let e = |n: &str| l.element(n).unwrap();
        let alpha = |x: &str, y: &str| {
            let mut v = vec![int(0); l.len()];
            v[l.one().0] = int(1);
            v[e(x).0] = int(1);
            v[e(y).0] = int(1);
            State::validate(&l, v).unwrap()
        };
        let f = ConditionalState::from_partition(
            &l,
            &[e("a"), e("a'")],
            &[alpha("a", "b"), alpha("a'", "b'")],
            &[ratio(1, 2), ratio(1, 2)],
        )
        .unwrap();
        assert!(matches!(SMap::from_conditional(&f), Err(SMapError::DomainTooSmall(_))));
    }

    #[test]
    fn zero_mass_in_closure_is_reported() {
        // ν(a) = 1, ν(a') = 0: the system generated by {a, 1, b, b'} needs a'
        let l = mo2();
        let e = |n| l.element(n).unwrap();
        let n = l.len();
        let mut v = vec![int(0); n * n];
        let mut set = |x: Element, y: Element, q: Rational| v[x.0 * n + y.0] = q;
        let (a, b, bc, one) = (e("a"), e("b"), e("b'"), l.one());
        set(a, a, int(1));
        set(a, one, int(1));
        set(one, a, int(1));
        set(one, one, int(1));
        for (x, q) in [(b, ratio(1, 2)), (bc, ratio(1, 2))] {
            set(x, x, q.clone());
            set(a, x, q.clone());
            set(x, a, q.clone());
            set(one, x, q.clone());
            set(x, one, q);
        }
        let p = SMap::validate(&l, v).unwrap();
        assert_eq!(
            p.to_conditional().unwrap_err(),
            SMapError::ZeroMassConditioning("a'".into())
        );
    }

    #[test]
    fn incomplete_tables_report_the_missing_entry() {
        let l = mo2();
        let n = l.len();
        let entries = vec![None; n * n];
        let (a, _) = complete_bounds(&l, entries).unwrap_err();
        assert_ne!(a, l.zero());
    }
}
