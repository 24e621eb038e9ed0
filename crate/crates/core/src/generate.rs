//! Standard small logics (Boolean algebras, `MO_n`, general horizontal sums of
//! Boolean blocks) and seeded random models on them.
//!
//! Random s-maps are drawn with integer numerators over a fixed common
//! denominator (1000 by default). Each block gets a strictly positive atom
//! distribution; for every ordered pair of distinct blocks the atom-level
//! table is a random point of the integer transportation polytope with those
//! row and column sums. The generator is `ChaCha8Rng::seed_from_u64(seed)`.

use crate::lattice::{Element, LogicError, QuantumLogic};
use crate::observable::DiscreteObservable;
use crate::rational::{int, ratio, Rational};
use crate::smap::{SMap, SMapError};
use crate::state::{ConditionalState, State, StateError};
use num_traits::Zero;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use thiserror::Error;

pub const DEFAULT_DENOMINATOR: u64 = 1000;

/// Largest block accepted by [`HorizontalSum::new`].
pub const MAX_BLOCK_ATOMS: usize = 6;

/// Largest logic on which the cubic witness search runs.
pub const BRUTE_FORCE_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("size out of range: {0}")]
    SizeOutOfRange(String),
    #[error("cannot allocate: {0}")]
    InfeasibleAllocation(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    SMap(Box<SMapError>),
    #[error(transparent)]
    State(Box<StateError>),
}

impl From<SMapError> for GenError {
    fn from(e: SMapError) -> Self {
        GenError::SMap(Box::new(e))
    }
}

impl From<StateError> for GenError {
    fn from(e: StateError) -> Self {
        GenError::State(Box::new(e))
    }
}

/// Which standard construction produced a logic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeFamily {
    Boolean(usize),
    Mo(usize),
    HorizontalSum(Vec<usize>),
}

impl LatticeFamily {
    /// `boolean 3`, `mo 2`, `hsum 3,2`.
    pub fn parse(family: &str, params: &str) -> Result<Self, GenError> {
        let bad = || GenError::SizeOutOfRange(format!("`{params}` is not a valid size for {family}"));
        match family {
            "boolean" => Ok(LatticeFamily::Boolean(params.parse().map_err(|_| bad())?)),
            "mo" => Ok(LatticeFamily::Mo(params.parse().map_err(|_| bad())?)),
            "hsum" => params
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()
                .map(LatticeFamily::HorizontalSum),
            other => Err(GenError::SizeOutOfRange(format!("unknown family `{other}`"))),
        }
    }

    pub fn build(&self) -> Result<HorizontalSum, GenError> {
        match self {
            LatticeFamily::Boolean(n) => HorizontalSum::boolean(*n),
            LatticeFamily::Mo(n) => HorizontalSum::mo(*n),
            LatticeFamily::HorizontalSum(blocks) => HorizontalSum::new(blocks),
        }
    }
}

/// Boolean blocks glued at their bounds, with the block structure kept for
/// sampling.
#[derive(Debug, Clone)]
pub struct HorizontalSum {
    logic: Arc<QuantumLogic>,
    // atoms of each block, in block order
    blocks: Vec<Vec<Element>>,
    // (block, atom mask) for every element other than 0 and 1
    position: Vec<Option<(usize, u32)>>,
}

fn block_letter(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("k{i}_")
    }
}

fn subset_name(letter: &str, k: usize, mask: u32) -> String {
    if k == 2 {
        return if mask == 1 {
            letter.to_string()
        } else {
            format!("{letter}'")
        };
    }
    (0..k)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| format!("{letter}{}", i + 1))
        .collect::<Vec<_>>()
        .join("+")
}

impl HorizontalSum {
    /// Powerset of an `n`-point set, `1 ≤ n ≤ 4`.
    pub fn boolean(n: usize) -> Result<Self, GenError> {
        if !(1..=4).contains(&n) {
            return Err(GenError::SizeOutOfRange(format!("boolean({n}) needs 1 ≤ n ≤ 4")));
        }
        HorizontalSum::new(&[n])
    }

    /// `n` four-element Boolean blocks sharing only 0 and 1, `1 ≤ n ≤ 8`.
    pub fn mo(n: usize) -> Result<Self, GenError> {
        if !(1..=8).contains(&n) {
            return Err(GenError::SizeOutOfRange(format!("mo({n}) needs 1 ≤ n ≤ 8")));
        }
        HorizontalSum::new(&vec![2; n])
    }

    /// Horizontal sum of Boolean blocks with the given atom counts. A block of
    /// one atom is only allowed alone (the two-element logic).
    pub fn new(block_atoms: &[usize]) -> Result<Self, GenError> {
        if block_atoms.is_empty() {
            return Err(GenError::SizeOutOfRange("no blocks".into()));
        }
        if block_atoms.len() > 1 && block_atoms.contains(&1) {
            return Err(GenError::SizeOutOfRange("one-atom blocks only occur alone".into()));
        }
        if let Some(k) = block_atoms.iter().find(|&&k| k == 0 || k > MAX_BLOCK_ATOMS) {
            return Err(GenError::SizeOutOfRange(format!(
                "block with {k} atoms, expected 1..={MAX_BLOCK_ATOMS}"
            )));
        }
        let total = 2 + block_atoms.iter().map(|&k| (1usize << k) - 2).sum::<usize>();
        if total > crate::lattice::MAX_ELEMENTS {
            return Err(GenError::SizeOutOfRange(format!("{total} elements exceed the limit")));
        }

        let mut names = vec!["0".to_string(), "1".to_string()];
        let mut order = Vec::new();
        let mut complements = Vec::new();
        let mut layout = Vec::new();
        for (bi, &k) in block_atoms.iter().enumerate() {
            let letter = block_letter(bi);
            let full = (1u32 << k) - 1;
            for mask in 1..full {
                names.push(subset_name(&letter, k, mask));
                layout.push((bi, mask));
            }
            for s in 1..full {
                for t in 1..full {
                    if s != t && s & !t == 0 {
                        order.push((subset_name(&letter, k, s), subset_name(&letter, k, t)));
                    }
                }
                if s < full ^ s {
                    complements.push((subset_name(&letter, k, s), subset_name(&letter, k, full ^ s)));
                }
            }
        }
        let logic = Arc::new(QuantumLogic::build(&names, &order, &complements)?);
        let mut position = vec![None, None];
        position.extend(layout.iter().map(|&p| Some(p)));
        let blocks = block_atoms
            .iter()
            .enumerate()
            .map(|(bi, &k)| {
                if k == 1 {
                    return vec![logic.one()];
                }
                (0..k)
                    .map(|i| {
                        let idx = layout.iter().position(|&p| p == (bi, 1 << i)).unwrap();
                        Element(idx + 2)
                    })
                    .collect()
            })
            .collect();
        Ok(HorizontalSum {
            logic,
            blocks,
            position,
        })
    }

    pub fn logic(&self) -> &Arc<QuantumLogic> {
        &self.logic
    }

    pub fn blocks(&self) -> &[Vec<Element>] {
        &self.blocks
    }

    /// Atoms below `e`, taken in block 0 for the top element.
    pub fn atoms_below(&self, e: Element) -> Vec<Element> {
        if e == self.logic.zero() {
            return Vec::new();
        }
        if e == self.logic.one() {
            return self.blocks[0].clone();
        }
        let (bi, mask) = self.position[e.0].unwrap();
        self.blocks[bi]
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &a)| a)
            .collect()
    }

    fn block_of(&self, e: Element) -> Option<usize> {
        self.position[e.0].map(|(b, _)| b)
    }

    /// Seeded random s-map with denominator [`DEFAULT_DENOMINATOR`].
    pub fn random_smap(&self, seed: u64) -> Result<SMap, GenError> {
        self.random_smap_with(seed, DEFAULT_DENOMINATOR)
    }

    pub fn random_smap_with(&self, seed: u64, denominator: u64) -> Result<SMap, GenError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nu: Vec<Vec<u64>> = self
            .blocks
            .iter()
            .map(|b| positive_composition(&mut rng, denominator, b.len()))
            .collect::<Result<_, _>>()?;
        let atom_count = self.logic.len();
        // atom-level numerators p[u][v]
        let mut atom_p = vec![vec![0u64; atom_count]; atom_count];
        for (bi, block) in self.blocks.iter().enumerate() {
            for (i, &u) in block.iter().enumerate() {
                atom_p[u.0][u.0] = nu[bi][i];
            }
        }
        for (b1, block1) in self.blocks.iter().enumerate() {
            for (b2, block2) in self.blocks.iter().enumerate() {
                if b1 == b2 {
                    continue;
                }
                let m = random_transport(&mut rng, &nu[b1], &nu[b2]);
                for (i, &u) in block1.iter().enumerate() {
                    for (j, &v) in block2.iter().enumerate() {
                        atom_p[u.0][v.0] = m[i][j];
                    }
                }
            }
        }
        let values = self
            .logic
            .elements()
            .flat_map(|a| self.logic.elements().map(move |b| (a, b)))
            .map(|(a, b)| {
                let (sa, sb) = (self.atoms_below(a), self.atoms_below(b));
                let num: u64 = sa.iter().flat_map(|u| sb.iter().map(|v| atom_p[u.0][v.0])).sum();
                ratio(num as i64, denominator as i64)
            })
            .collect();
        Ok(SMap::validate(&self.logic, values)?)
    }

    /// Whether `p` has the shape the generator produces: atoms of one block
    /// are mutually exclusive and every cross-block atom table has the
    /// diagonal masses as its row and column sums.
    pub fn fits_generator_marginals(&self, p: &SMap) -> bool {
        let nu = |e: Element| p.value(e, e).clone();
        for (b1, block1) in self.blocks.iter().enumerate() {
            for (b2, block2) in self.blocks.iter().enumerate() {
                if b1 == b2 {
                    let exclusive = block1
                        .iter()
                        .all(|&u| block1.iter().all(|&v| u == v || p.value(u, v).is_zero()));
                    if !exclusive {
                        return false;
                    }
                    continue;
                }
                for &u in block1 {
                    let row: Rational = block2.iter().map(|&v| p.value(u, v)).sum();
                    if row != nu(u) {
                        return false;
                    }
                }
                for &v in block2 {
                    let col: Rational = block1.iter().map(|&u| p.value(u, v)).sum();
                    if col != nu(v) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Random state concentrated on `support` (which must be nonzero): the
    /// block containing `support` puts all its mass on atoms below it, every
    /// other block gets an arbitrary positive distribution.
    pub fn random_state(&self, seed: u64, support: Element) -> Result<State, GenError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = DEFAULT_DENOMINATOR;
        let home = self.block_of(support);
        let below = self.atoms_below(support);
        if below.is_empty() {
            return Err(GenError::InfeasibleAllocation("no state is concentrated on 0".into()));
        }
        let mut atom_mass = vec![Rational::zero(); self.logic.len()];
        for (bi, block) in self.blocks.iter().enumerate() {
            let targets: Vec<Element> = if Some(bi) == home { below.clone() } else { block.clone() };
            let parts = positive_composition(&mut rng, n, targets.len())?;
            for (a, w) in targets.iter().zip(parts) {
                atom_mass[a.0] = ratio(w as i64, n as i64);
            }
        }
        let values = self
            .logic
            .elements()
            .map(|e| self.atoms_below(e).iter().map(|a| &atom_mass[a.0]).sum())
            .collect();
        Ok(State::validate(&self.logic, values)?)
    }

    /// Conditional state from a random partition of one block's atoms (some
    /// blocks of the partition possibly dropped), concentrated random states
    /// and random positive weights.
    pub fn random_partition_conditional(&self, seed: u64) -> Result<ConditionalState, GenError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bi = rng.gen_range(0..self.blocks.len());
        let atoms = &self.blocks[bi];
        let groups = rng.gen_range(1..=atoms.len());
        let mut masks = vec![0u32; groups];
        for i in 0..atoms.len() {
            let g = if i < groups { i } else { rng.gen_range(0..groups) };
            masks[g] |= 1 << i;
        }
        let keep = rng.gen_range(1..=groups);
        let parts: Vec<Element> = masks[..keep]
            .iter()
            .map(|&m| {
                let chosen = atoms
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| m >> i & 1 == 1)
                    .map(|(_, &a)| a);
                self.logic.join_all(chosen)
            })
            .collect();
        let alphas = parts
            .iter()
            .map(|&p| self.random_state(rng.gen(), p))
            .collect::<Result<Vec<_>, _>>()?;
        let weights: Vec<Rational> = positive_composition(&mut rng, DEFAULT_DENOMINATOR, parts.len())?
            .into_iter()
            .map(|w| ratio(w as i64, DEFAULT_DENOMINATOR as i64))
            .collect();
        Ok(ConditionalState::from_partition(
            &self.logic,
            &parts,
            &alphas,
            &weights,
        )?)
    }

    /// Observable taking `values[i]` on the `i`-th atom of `block`.
    pub fn block_observable(&self, block: usize, values: &[Rational]) -> Result<DiscreteObservable, GenError> {
        let atoms = &self.blocks[block];
        if values.len() != atoms.len() {
            return Err(GenError::SizeOutOfRange(format!(
                "{} values for a block of {} atoms",
                values.len(),
                atoms.len()
            )));
        }
        DiscreteObservable::new(&self.logic, values.iter().cloned().zip(atoms.iter().copied()).collect())
            .map_err(|e| GenError::SizeOutOfRange(e.to_string()))
    }

    /// Observables on each block with distinct random values in `[-5, 5]`,
    /// some of them halves.
    pub fn random_block_observables(&self, seed: u64) -> Vec<DiscreteObservable> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..self.blocks.len())
            .map(|bi| {
                let k = self.blocks[bi].len();
                let picks = sample(&mut rng, 21, k);
                let values: Vec<Rational> = picks.iter().map(|i| ratio(i as i64 - 10, 2)).collect();
                self.block_observable(bi, &values)
                    .expect("distinct values on a block partition")
            })
            .collect()
    }
}

/// `k` positive integers summing to `total`.
fn positive_composition<R: Rng>(rng: &mut R, total: u64, k: usize) -> Result<Vec<u64>, GenError> {
    if k as u64 > total {
        return Err(GenError::InfeasibleAllocation(format!(
            "{k} positive parts do not fit in denominator {total}"
        )));
    }
    if k == 1 {
        return Ok(vec![total]);
    }
    let mut cuts: Vec<u64> = sample(rng, (total - 1) as usize, k - 1)
        .iter()
        .map(|c| c as u64 + 1)
        .collect();
    cuts.sort_unstable();
    let mut parts = Vec::with_capacity(k);
    let mut prev = 0;
    for c in cuts {
        parts.push(c - prev);
        prev = c;
    }
    parts.push(total - prev);
    Ok(parts)
}

/// Random nonnegative integer matrix with the given row and column sums
/// (which must have equal totals), filled row by row within the bounds that
/// keep the rest feasible.
fn random_transport<R: Rng>(rng: &mut R, rows: &[u64], cols: &[u64]) -> Vec<Vec<u64>> {
    let (m, n) = (rows.len(), cols.len());
    let mut col_left = cols.to_vec();
    let mut out = vec![vec![0u64; n]; m];
    for i in 0..m {
        let mut row_left = rows[i];
        if i == m - 1 {
            out[i].copy_from_slice(&col_left);
            break;
        }
        for j in 0..n {
            let x = if j == n - 1 {
                row_left
            } else {
                let rest: u64 = col_left[j + 1..].iter().sum();
                let lo = row_left.saturating_sub(rest);
                let hi = row_left.min(col_left[j]);
                rng.gen_range(lo..=hi)
            };
            out[i][j] = x;
            row_left -= x;
            col_left[j] -= x;
        }
    }
    out
}

/// Exhaustive witness search for compatibility: mutually orthogonal
/// `a₁, b₁, c` with `a = a₁ ∨ c` and `b = b₁ ∨ c`.
pub fn brute_force_compatible(logic: &QuantumLogic, a: Element, b: Element) -> Result<bool, GenError> {
    if logic.len() > BRUTE_FORCE_LIMIT {
        return Err(GenError::SizeOutOfRange(format!(
            "witness search limited to {BRUTE_FORCE_LIMIT} elements"
        )));
    }
    Ok(compatibility_witness(logic, a, b).is_some())
}

pub fn compatibility_witness(logic: &QuantumLogic, a: Element, b: Element) -> Option<(Element, Element, Element)> {
    for c in logic.elements() {
        for a1 in logic.elements() {
            if !logic.is_orthogonal(a1, c) || logic.join(a1, c) != a {
                continue;
            }
            for b1 in logic.elements() {
                if logic.is_orthogonal(b1, c) && logic.is_orthogonal(a1, b1) && logic.join(b1, c) == b {
                    return Some((a1, b1, c));
                }
            }
        }
    }
    None
}

/// Order isomorphism from `from` onto `to` that also carries complements,
/// found by exhaustive search over bijections fixing the bounds.
pub fn find_isomorphism(from: &QuantumLogic, to: &QuantumLogic) -> Option<Vec<Element>> {
    if from.len() != to.len() || from.len() > 10 {
        return None;
    }
    let n = from.len();
    let mut map: Vec<Option<Element>> = vec![None; n];
    let mut used = vec![false; n];
    map[from.zero().0] = Some(to.zero());
    map[from.one().0] = Some(to.one());
    used[to.zero().0] = true;
    used[to.one().0] = true;
    fn extend(
        i: usize,
        from: &QuantumLogic,
        to: &QuantumLogic,
        map: &mut Vec<Option<Element>>,
        used: &mut Vec<bool>,
    ) -> bool {
        let n = from.len();
        if i == n {
            let m = |e: Element| map[e.0].unwrap();
            return from.elements().all(|a| {
                to.complement(m(a)) == m(from.complement(a))
                    && from.elements().all(|b| from.leq(a, b) == to.leq(m(a), m(b)))
            });
        }
        if map[i].is_some() {
            return extend(i + 1, from, to, map, used);
        }
        for t in 0..n {
            if used[t] {
                continue;
            }
            used[t] = true;
            map[i] = Some(Element(t));
            if extend(i + 1, from, to, map, used) {
                return true;
            }
            map[i] = None;
            used[t] = false;
        }
        false
    }
    if extend(0, from, to, &mut map, &mut used) {
        Some(map.into_iter().map(Option::unwrap).collect())
    } else {
        None
    }
}

/// Values `1, 2, …` for quick deterministic observables.
pub fn counting_values(k: usize) -> Vec<Rational> {
    (1..=k as i64).map(int).collect()
}
