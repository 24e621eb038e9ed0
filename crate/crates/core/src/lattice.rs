//! Finite quantum logics: bounded orthocomplemented lattices satisfying the
//! orthomodular law, with precomputed meet/join tables.

use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

/// Largest logic accepted by [`QuantumLogic::build`]; element sets are `u64` masks.
pub const MAX_ELEMENTS: usize = 64;

/// Index of an element in its logic. Indices are dense `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(pub usize);

impl Element {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A set of elements of one logic, stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct ElementSet(pub u64);

impl ElementSet {
    pub fn empty() -> Self {
        ElementSet(0)
    }

    pub fn contains(self, e: Element) -> bool {
        self.0 >> e.0 & 1 == 1
    }

    pub fn insert(&mut self, e: Element) -> bool {
        let fresh = !self.contains(e);
        self.0 |= 1 << e.0;
        fresh
    }

    pub fn remove(&mut self, e: Element) {
        self.0 &= !(1 << e.0);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: ElementSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Element> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(Element(i))
        })
    }
}

impl FromIterator<Element> for ElementSet {
    fn from_iter<I: IntoIterator<Item = Element>>(iter: I) -> Self {
        let mut s = ElementSet::empty();
        for e in iter {
            s.insert(e);
        }
        s
    }
}

/// The axiom that failed during [`QuantumLogic::build`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    /// `(a⊥)⊥ = a`
    Involution,
    /// `a ∨ a⊥ = 1`
    Complement,
    /// `a ≤ b ⇒ b⊥ ≤ a⊥`
    Antitone,
    /// `a ≤ b ⇒ b = a ∨ (a⊥ ∧ b)`
    Orthomodular,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Involution => "(ii) involution",
            Axiom::Complement => "(iii) complement join",
            Axiom::Antitone => "(iv) order reversal",
            Axiom::Orthomodular => "(v) orthomodular law",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("logic has {0} elements, at most {MAX_ELEMENTS} are supported")]
    TooLarge(usize),
    #[error("invalid element name `{0}`")]
    InvalidName(String),
    #[error("duplicate element name `{0}`")]
    DuplicateName(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("the bounds `0` and `1` must both be declared")]
    MissingBounds,
    #[error("order contains a cycle through `{0}` and `{1}`")]
    CycleInOrder(String, String),
    #[error("no meet or join for `{0}` and `{1}`")]
    MissingMeetOrJoin(String, String),
    #[error("no complement given for `{0}`")]
    MissingComplement(String),
    #[error("axiom {axiom} fails at {}", .witness.join(", "))]
    AxiomViolation { axiom: Axiom, witness: Vec<String> },
}

/// A validated finite quantum logic. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumLogic {
    names: Vec<String>,
    index: HashMap<String, Element>,
    // up[a] = { b : a ≤ b }
    up: Vec<u64>,
    complement: Vec<Element>,
    meet: Vec<Element>,
    join: Vec<Element>,
    zero: Element,
    one: Element,
}

impl QuantumLogic {
    /// Builds and validates a logic. `order` may be any generating relation
    /// (`(a, b)` meaning `a ≤ b`); `0 ≤ x ≤ 1` and the complement pair `0, 1`
    /// are implied by the reserved bound names.
    pub fn build<S: AsRef<str>>(elements: &[S], order: &[(S, S)], complements: &[(S, S)]) -> Result<Self, LogicError> {
        let n = elements.len();
        if n > MAX_ELEMENTS {
            return Err(LogicError::TooLarge(n));
        }
        let mut names = Vec::with_capacity(n);
        let mut index = HashMap::with_capacity(n);
        for (i, name) in elements.iter().enumerate() {
            let name = name.as_ref();
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(LogicError::InvalidName(name.to_string()));
            }
            if index.insert(name.to_string(), Element(i)).is_some() {
                return Err(LogicError::DuplicateName(name.to_string()));
            }
            names.push(name.to_string());
        }
        let (zero, one) = match (index.get("0"), index.get("1")) {
            (Some(&z), Some(&o)) => (z, o),
            _ => return Err(LogicError::MissingBounds),
        };
        let lookup = |s: &S| -> Result<Element, LogicError> {
            index
                .get(s.as_ref())
                .copied()
                .ok_or_else(|| LogicError::UnknownElement(s.as_ref().to_string()))
        };

        let mut up = vec![0u64; n];
        for (i, row) in up.iter_mut().enumerate() {
            *row |= 1 << i | 1 << one.0;
        }
        up[zero.0] = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        for (a, b) in order {
            let (a, b) = (lookup(a)?, lookup(b)?);
            up[a.0] |= 1 << b.0;
        }
        // Warshall closure on bit rows.
        for k in 0..n {
            let row_k = up[k];
            for row in up.iter_mut() {
                if *row >> k & 1 == 1 {
                    *row |= row_k;
                }
            }
        }
        for a in 0..n {
            for b in (a + 1)..n {
                if up[a] >> b & 1 == 1 && up[b] >> a & 1 == 1 {
                    return Err(LogicError::CycleInOrder(names[a].clone(), names[b].clone()));
                }
            }
        }

        let mut down = vec![0u64; n];
        for (a, &row) in up.iter().enumerate() {
            for b in ElementSet(row).iter() {
                down[b.0] |= 1 << a;
            }
        }
        let greatest = |set: u64, rows: &[u64]| -> Option<Element> {
            // the member g whose row covers the whole set
            ElementSet(set).iter().find(|g| set & !rows[g.0] == 0)
        };
        let mut meet = vec![Element(0); n * n];
        let mut join = vec![Element(0); n * n];
        for a in 0..n {
            for b in a..n {
                let m = greatest(down[a] & down[b], &down)
                    .ok_or_else(|| LogicError::MissingMeetOrJoin(names[a].clone(), names[b].clone()))?;
                let j = greatest(up[a] & up[b], &up)
                    .ok_or_else(|| LogicError::MissingMeetOrJoin(names[a].clone(), names[b].clone()))?;
                meet[a * n + b] = m;
                meet[b * n + a] = m;
                join[a * n + b] = j;
                join[b * n + a] = j;
            }
        }

        let mut complement: Vec<Option<Element>> = vec![None; n];
        let zero_one = [(zero, one)];
        let given = complements
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>, LogicError>>()?;
        for &(a, b) in zero_one.iter().chain(given.iter()) {
            for (x, y) in [(a, b), (b, a)] {
                match complement[x.0] {
                    Some(prev) if prev != y => {
                        return Err(LogicError::AxiomViolation {
                            axiom: Axiom::Involution,
                            witness: vec![names[x.0].clone(), names[prev.0].clone(), names[y.0].clone()],
                        })
                    }
                    _ => complement[x.0] = Some(y),
                }
            }
        }
        let complement = complement
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.ok_or_else(|| LogicError::MissingComplement(names[i].clone())))
            .collect::<Result<Vec<_>, _>>()?;

        let logic = QuantumLogic {
            names,
            index,
            up,
            complement,
            meet,
            join,
            zero,
            one,
        };
        logic.check_axioms()?;
        Ok(logic)
    }

    fn check_axioms(&self) -> Result<(), LogicError> {
        let fail = |axiom, els: &[Element]| LogicError::AxiomViolation {
            axiom,
            witness: els.iter().map(|&e| self.name(e).to_string()).collect(),
        };
        for a in self.elements() {
            if self.complement(self.complement(a)) != a {
                return Err(fail(Axiom::Involution, &[a]));
            }
            if self.join(a, self.complement(a)) != self.one {
                return Err(fail(Axiom::Complement, &[a]));
            }
        }
        for a in self.elements() {
            for b in self.elements() {
                if !self.leq(a, b) {
                    continue;
                }
                if !self.leq(self.complement(b), self.complement(a)) {
                    return Err(fail(Axiom::Antitone, &[a, b]));
                }
                if self.join(a, self.meet(self.complement(a), b)) != b {
                    return Err(fail(Axiom::Orthomodular, &[a, b]));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + Clone {
        (0..self.len()).map(Element)
    }

    /// All elements except `0`.
    pub fn nonzero(&self) -> impl Iterator<Item = Element> + Clone + '_ {
        self.elements().filter(move |&e| e != self.zero)
    }

    pub fn all(&self) -> ElementSet {
        self.elements().collect()
    }

    pub fn zero(&self) -> Element {
        self.zero
    }

    pub fn one(&self) -> Element {
        self.one
    }

    pub fn is_bound(&self, e: Element) -> bool {
        e == self.zero || e == self.one
    }

    pub fn name(&self, e: Element) -> &str {
        &self.names[e.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element(&self, name: &str) -> Option<Element> {
        self.index.get(name).copied()
    }

    pub fn leq(&self, a: Element, b: Element) -> bool {
        self.up[a.0] >> b.0 & 1 == 1
    }

    pub fn lt(&self, a: Element, b: Element) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn meet(&self, a: Element, b: Element) -> Element {
        self.meet[a.0 * self.len() + b.0]
    }

    pub fn join(&self, a: Element, b: Element) -> Element {
        self.join[a.0 * self.len() + b.0]
    }

    pub fn join_all<I: IntoIterator<Item = Element>>(&self, items: I) -> Element {
        items.into_iter().fold(self.zero, |acc, e| self.join(acc, e))
    }

    pub fn meet_all<I: IntoIterator<Item = Element>>(&self, items: I) -> Element {
        items.into_iter().fold(self.one, |acc, e| self.meet(acc, e))
    }

    pub fn complement(&self, a: Element) -> Element {
        self.complement[a.0]
    }

    /// `a ⊥ b` iff `a ≤ b⊥`.
    pub fn is_orthogonal(&self, a: Element, b: Element) -> bool {
        self.leq(a, self.complement(b))
    }

    /// Elements pairwise orthogonal.
    pub fn mutually_orthogonal(&self, items: &[Element]) -> bool {
        items
            .iter()
            .enumerate()
            .all(|(i, &a)| items[i + 1..].iter().all(|&b| self.is_orthogonal(a, b)))
    }

    /// `a ↔ b`, decided by the orthomodular identity `a = (a ∧ b) ∨ (a ∧ b⊥)`.
    pub fn is_compatible(&self, a: Element, b: Element) -> bool {
        a == self.join(self.meet(a, b), self.meet(a, self.complement(b)))
    }

    /// Atoms: the elements covering `0`.
    pub fn atoms(&self) -> Vec<Element> {
        self.nonzero()
            .filter(|&a| self.nonzero().all(|b| b == a || !self.leq(b, a)))
            .collect()
    }

    /// Covering pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(Element, Element)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.elements() {
                if self.lt(a, b) && !self.elements().any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}
