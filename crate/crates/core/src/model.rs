//! Line-oriented model files.
//!
//! ```text
//! [logic]
//! elements 0 1 a a' b b'
//! order a 1            # a ≤ 1; any generating relation
//! complement a a'
//!
//! [state m]
//! a = 0.4              # integer, n/d or decimal, parsed exactly
//!
//! [cond f]
//! b | a = 1/5          # f(b | a)
//!
//! [smap p]
//! a , b = 0.12         # p(a, b)
//!
//! [observable x]
//! -1 -> a              # x({-1}) = a
//! ```
//!
//! Rows for `0` and `1` may be omitted from state, conditional and s-map
//! sections; they are completed from the bounds and by additivity.

use crate::lattice::{Element, LogicError, QuantumLogic};
use crate::observable::{DiscreteObservable, ObservableError};
use crate::rational::{self, Rational};
use crate::smap::{complete_bounds, SMap, SMapError};
use crate::state::{ConditionalState, ConditionalSystem, State, StateError};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::{self, Write as _};
use std::path::Path;
use std::sync::Arc;
use thiserror::Error;

const RESERVED: &[char] = &['=', '|', ',', '#', '[', ']'];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("line {line}: unknown element `{token}`")]
    UnknownElement { line: usize, token: String },
    #[error("duplicate section [{0}]")]
    DuplicateSection(String),
    #[error("no [logic] section")]
    MissingLogic,
    #[error("no [{0}] section")]
    MissingSection(String),
    #[error("[{section}] has no value for {entry}")]
    MissingValue { section: String, entry: String },
    #[error("[logic]: {0}")]
    Logic(#[from] LogicError),
    #[error("[{section}]: {source}")]
    State { section: String, source: Box<StateError> },
    #[error("[{section}]: {source}")]
    SMap { section: String, source: Box<SMapError> },
    #[error("[{section}]: {source}")]
    Observable { section: String, source: ObservableError },
}

impl ModelError {
    /// Malformed input, as opposed to a well-formed model that fails validation.
    pub fn is_parse_error(&self) -> bool {
        matches!(
            self,
            ModelError::Io { .. }
                | ModelError::Parse { .. }
                | ModelError::UnknownElement { .. }
                | ModelError::DuplicateSection(_)
                | ModelError::MissingLogic
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SectionKind {
    State,
    Cond,
    SMap,
    Observable,
}

impl SectionKind {
    fn keyword(self) -> &'static str {
        match self {
            SectionKind::State => "state",
            SectionKind::Cond => "cond",
            SectionKind::SMap => "smap",
            SectionKind::Observable => "observable",
        }
    }
}

/// The `[logic]` section as written: element names plus generating relations.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LogicSpec {
    pub elements: Vec<String>,
    pub order: Vec<(String, String)>,
    pub complements: Vec<(String, String)>,
}

/// A named table section. Keys are element indices in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table<K> {
    pub name: String,
    pub entries: Vec<(K, Rational)>,
}

/// Parsed, unvalidated model.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModelFile {
    pub logic: LogicSpec,
    pub states: Vec<Table<Element>>,
    /// `((b, a), f(b | a))`
    pub conds: Vec<Table<(Element, Element)>>,
    /// `((a, b), p(a, b))`
    pub smaps: Vec<Table<(Element, Element)>>,
    /// `(x({t}), t)`
    pub observables: Vec<Table<Element>>,
}

impl<K> Table<K> {
    fn new(name: &str) -> Self {
        Table {
            name: name.to_string(),
            entries: Vec::new(),
        }
    }
}

enum Current {
    None,
    Logic,
    Table(SectionKind, usize),
}

impl ModelFile {
    pub fn read(path: &Path) -> Result<Self, ModelError> {
        let text = std::fs::read_to_string(path).map_err(|e| ModelError::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        ModelFile::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let mut model = ModelFile::default();
        let mut current = Current::None;
        let mut seen_logic = false;
        let mut names: HashMap<String, Element> = HashMap::new();
        let mut sections: HashSet<(SectionKind, String)> = HashSet::new();
        let mut keys: HashSet<(SectionKind, usize, String)> = HashSet::new();

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let perr = |reason: &str| ModelError::Parse {
                line,
                reason: reason.to_string(),
            };
            let lookup = |token: &str| -> Result<Element, ModelError> {
                names.get(token).copied().ok_or_else(|| ModelError::UnknownElement {
                    line,
                    token: token.to_string(),
                })
            };

            if let Some(header) = content.strip_prefix('[') {
                let header = header
                    .strip_suffix(']')
                    .ok_or_else(|| perr("unterminated section header"))?;
                let words: Vec<&str> = header.split_whitespace().collect();
                current = match words.as_slice() {
                    ["logic"] => {
                        if seen_logic {
                            return Err(ModelError::DuplicateSection("logic".into()));
                        }
                        seen_logic = true;
                        Current::Logic
                    }
                    [kind, name] => {
                        let kind = match *kind {
                            "state" => SectionKind::State,
                            "cond" => SectionKind::Cond,
                            "smap" => SectionKind::SMap,
                            "observable" => SectionKind::Observable,
                            other => return Err(perr(&format!("unknown section kind `{other}`"))),
                        };
                        if !seen_logic {
                            return Err(perr("the [logic] section must come first"));
                        }
                        if !sections.insert((kind, name.to_string())) {
                            return Err(ModelError::DuplicateSection(format!("{} {name}", kind.keyword())));
                        }
                        let index = match kind {
                            SectionKind::State => {
                                model.states.push(Table::new(name));
                                model.states.len() - 1
                            }
                            SectionKind::Cond => {
                                model.conds.push(Table::new(name));
                                model.conds.len() - 1
                            }
                            SectionKind::SMap => {
                                model.smaps.push(Table::new(name));
                                model.smaps.len() - 1
                            }
                            SectionKind::Observable => {
                                model.observables.push(Table::new(name));
                                model.observables.len() - 1
                            }
                        };
                        Current::Table(kind, index)
                    }
                    _ => return Err(perr("malformed section header")),
                };
                continue;
            }

            match current {
                Current::None => return Err(perr("content outside of a section")),
                Current::Logic => {
                    let words: Vec<&str> = content.split_whitespace().collect();
                    match words.as_slice() {
                        ["elements", rest @ ..] => {
                            for &tok in rest {
                                if tok.contains(RESERVED) || tok.contains("->") {
                                    return Err(perr(&format!("element name `{tok}` uses a reserved character")));
                                }
                                if names.contains_key(tok) {
                                    return Err(perr(&format!("element `{tok}` declared twice")));
                                }
                                names.insert(tok.to_string(), Element(model.logic.elements.len()));
                                model.logic.elements.push(tok.to_string());
                            }
                        }
                        ["order", a, b] => {
                            lookup(a)?;
                            lookup(b)?;
                            model.logic.order.push((a.to_string(), b.to_string()));
                        }
                        ["complement", a, b] => {
                            lookup(a)?;
                            lookup(b)?;
                            model.logic.complements.push((a.to_string(), b.to_string()));
                        }
                        _ => return Err(perr("expected `elements`, `order a b` or `complement a b`")),
                    }
                }
                Current::Table(kind, index) => {
                    let (lhs, rhs) = match kind {
                        SectionKind::Observable => content
                            .split_once("->")
                            .ok_or_else(|| perr("expected `<value> -> <element>`"))?,
                        _ => content.rsplit_once('=').ok_or_else(|| perr("expected `= <value>`"))?,
                    };
                    let number = |s: &str| rational::parse(s).map_err(|e| perr(&e.to_string()));
                    let key = match kind {
                        SectionKind::State => {
                            let e = lookup(lhs.trim())?;
                            model.states[index].entries.push((e, number(rhs)?));
                            lhs.trim().to_string()
                        }
                        SectionKind::Cond | SectionKind::SMap => {
                            let sep = if kind == SectionKind::Cond { '|' } else { ',' };
                            let (x, y) = lhs
                                .split_once(sep)
                                .ok_or_else(|| perr(&format!("expected `<element> {sep} <element>`")))?;
                            let (x, y) = (lookup(x.trim())?, lookup(y.trim())?);
                            let v = number(rhs)?;
                            let table = if kind == SectionKind::Cond {
                                &mut model.conds[index]
                            } else {
                                &mut model.smaps[index]
                            };
                            table.entries.push(((x, y), v));
                            format!("{} {}", x.0, y.0)
                        }
                        SectionKind::Observable => {
                            let e = lookup(rhs.trim())?;
                            let t = number(lhs)?;
                            let key = rational::fraction(&t);
                            model.observables[index].entries.push((e, t));
                            key
                        }
                    };
                    if !keys.insert((kind, index, key)) {
                        return Err(perr("duplicate entry"));
                    }
                }
            }
        }
        if !seen_logic {
            return Err(ModelError::MissingLogic);
        }
        Ok(model)
    }

    pub fn build_logic(&self) -> Result<Arc<QuantumLogic>, ModelError> {
        let spec = &self.logic;
        Ok(Arc::new(QuantumLogic::build(
            &spec.elements,
            &spec.order,
            &spec.complements,
        )?))
    }

    fn find<'a, K>(tables: &'a [Table<K>], kind: SectionKind, name: &str) -> Result<&'a Table<K>, ModelError> {
        tables
            .iter()
            .find(|t| t.name == name)
            .ok_or_else(|| ModelError::MissingSection(format!("{} {name}", kind.keyword())))
    }

    pub fn state(&self, logic: &Arc<QuantumLogic>, name: &str) -> Result<State, ModelError> {
        let table = Self::find(&self.states, SectionKind::State, name)?;
        let section = format!("state {name}");
        let mut values: Vec<Option<Rational>> = vec![None; logic.len()];
        for (e, v) in &table.entries {
            values[e.0] = Some(v.clone());
        }
        values[logic.zero().0].get_or_insert_with(Rational::zero);
        values[logic.one().0].get_or_insert_with(Rational::one);
        let values = logic
            .elements()
            .map(|e| {
                values[e.0].clone().ok_or_else(|| ModelError::MissingValue {
                    section: section.clone(),
                    entry: format!("`{}`", logic.name(e)),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        State::validate(logic, values).map_err(|e| ModelError::State {
            section,
            source: Box::new(e),
        })
    }

    /// The conditioning set is the set of elements written after `|`,
    /// closed into a conditional system; every member needs a full column.
    pub fn conditional(&self, logic: &Arc<QuantumLogic>, name: &str) -> Result<ConditionalState, ModelError> {
        let table = Self::find(&self.conds, SectionKind::Cond, name)?;
        let section = format!("cond {name}");
        let state_err = |e| ModelError::State {
            section: section.clone(),
            source: Box::new(e),
        };
        let seed = table.entries.iter().map(|((_, a), _)| *a).collect();
        let cs = ConditionalSystem::generated(logic, seed).map_err(state_err)?;
        let given: HashMap<(Element, Element), &Rational> = table.entries.iter().map(|(k, v)| (*k, v)).collect();
        let mut columns = BTreeMap::new();
        for a in cs.iter() {
            let col = logic
                .elements()
                .map(|b| match given.get(&(b, a)) {
                    Some(v) => Ok((*v).clone()),
                    None if b == logic.zero() => Ok(Rational::zero()),
                    None if b == logic.one() => Ok(Rational::one()),
                    None => Err(ModelError::MissingValue {
                        section: section.clone(),
                        entry: format!("`{} | {}`", logic.name(b), logic.name(a)),
                    }),
                })
                .collect::<Result<Vec<_>, _>>()?;
            columns.insert(a, col);
        }
        ConditionalState::validate(&cs, columns).map_err(state_err)
    }

    pub fn smap(&self, logic: &Arc<QuantumLogic>, name: &str) -> Result<SMap, ModelError> {
        let table = Self::find(&self.smaps, SectionKind::SMap, name)?;
        let section = format!("smap {name}");
        let n = logic.len();
        let mut entries = vec![None; n * n];
        for ((a, b), v) in &table.entries {
            entries[a.0 * n + b.0] = Some(v.clone());
        }
        let values = complete_bounds(logic, entries).map_err(|(a, b)| ModelError::MissingValue {
            section: section.clone(),
            entry: format!("`{} , {}`", logic.name(a), logic.name(b)),
        })?;
        SMap::validate(logic, values).map_err(|e| ModelError::SMap {
            section,
            source: Box::new(e),
        })
    }

    pub fn observable(&self, logic: &Arc<QuantumLogic>, name: &str) -> Result<DiscreteObservable, ModelError> {
        let table = Self::find(&self.observables, SectionKind::Observable, name)?;
        let assignment = table.entries.iter().map(|(e, t)| (t.clone(), *e)).collect();
        DiscreteObservable::new(logic, assignment).map_err(|source| ModelError::Observable {
            section: format!("observable {name}"),
            source,
        })
    }

    /// Names of every section, as `kind name`.
    pub fn section_names(&self) -> Vec<(SectionKind, String)> {
        let mut out = Vec::new();
        out.extend(self.states.iter().map(|t| (SectionKind::State, t.name.clone())));
        out.extend(self.conds.iter().map(|t| (SectionKind::Cond, t.name.clone())));
        out.extend(self.smaps.iter().map(|t| (SectionKind::SMap, t.name.clone())));
        out.extend(
            self.observables
                .iter()
                .map(|t| (SectionKind::Observable, t.name.clone())),
        );
        out
    }
}

impl fmt::Display for ModelFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |e: &Element| self.logic.elements[e.0].as_str();
        writeln!(f, "[logic]")?;
        writeln!(f, "elements {}", self.logic.elements.join(" "))?;
        for (a, b) in &self.logic.order {
            writeln!(f, "order {a} {b}")?;
        }
        for (a, b) in &self.logic.complements {
            writeln!(f, "complement {a} {b}")?;
        }
        for t in &self.states {
            writeln!(f, "\n[state {}]", t.name)?;
            for (e, v) in &t.entries {
                writeln!(f, "{} = {}", name(e), rational::fraction(v))?;
            }
        }
        for t in &self.conds {
            writeln!(f, "\n[cond {}]", t.name)?;
            for ((b, a), v) in &t.entries {
                writeln!(f, "{} | {} = {}", name(b), name(a), rational::fraction(v))?;
            }
        }
        for t in &self.smaps {
            writeln!(f, "\n[smap {}]", t.name)?;
            for ((a, b), v) in &t.entries {
                writeln!(f, "{} , {} = {}", name(a), name(b), rational::fraction(v))?;
            }
        }
        for t in &self.observables {
            writeln!(f, "\n[observable {}]", t.name)?;
            for (e, v) in &t.entries {
                writeln!(f, "{} -> {}", rational::fraction(v), name(e))?;
            }
        }
        Ok(())
    }
}

/// `[logic]` section text: covering pairs not involving the bounds, and each
/// complementary pair once.
pub fn render_logic(logic: &QuantumLogic) -> String {
    let mut out = String::from("[logic]\n");
    writeln!(out, "elements {}", logic.names().join(" ")).unwrap();
    for (a, b) in logic.covers() {
        if !logic.is_bound(a) && !logic.is_bound(b) {
            writeln!(out, "order {} {}", logic.name(a), logic.name(b)).unwrap();
        }
    }
    for a in logic.elements() {
        let ac = logic.complement(a);
        if a < ac && !logic.is_bound(a) {
            writeln!(out, "complement {} {}", logic.name(a), logic.name(ac)).unwrap();
        }
    }
    out
}

/// Full `[smap name]` section, including the rows and columns of the bounds.
pub fn render_smap(name: &str, p: &SMap) -> String {
    let logic = p.logic();
    let mut out = format!("[smap {name}]\n");
    for a in logic.elements() {
        for b in logic.elements() {
            writeln!(
                out,
                "{} , {} = {}",
                logic.name(a),
                logic.name(b),
                rational::fraction(p.value(a, b))
            )
            .unwrap();
        }
    }
    out
}

/// Full `[cond name]` section over every conditioning member.
pub fn render_conditional(name: &str, f: &ConditionalState) -> String {
    let logic = f.logic();
    let mut out = format!("[cond {name}]\n");
    for a in f.system().iter() {
        for b in logic.elements() {
            writeln!(
                out,
                "{} | {} = {}",
                logic.name(b),
                logic.name(a),
                rational::fraction(f.value(b, a))
            )
            .unwrap();
        }
    }
    out
}

pub fn render_state(name: &str, m: &State) -> String {
    let logic = m.logic();
    let mut out = format!("[state {name}]\n");
    for e in logic.elements() {
        writeln!(out, "{} = {}", logic.name(e), rational::fraction(m.value(e))).unwrap();
    }
    out
}

pub fn render_observable(name: &str, x: &DiscreteObservable) -> String {
    let logic = x.logic();
    let mut out = format!("[observable {name}]\n");
    for (t, e) in x.assignment() {
        writeln!(out, "{} -> {}", rational::fraction(t), logic.name(*e)).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    const SMALL: &str = "\
# six-element logic
[logic]
elements 0 1 a a' b b'
complement a a'
complement b b'

[state m]
a = 0.4
a' = 3/5
b = 0.3
b' = 0.7

[observable x]
-1 -> a
1 -> a'   # trailing comment
";

    #[test]
    fn parses_and_builds() {
        let model = ModelFile::parse(SMALL).unwrap();
        let logic = model.build_logic().unwrap();
        let m = model.state(&logic, "m").unwrap();
        assert_eq!(m.value(logic.element("a").unwrap()), &ratio(2, 5));
        let x = model.observable(&logic, "x").unwrap();
        assert_eq!(x.assignment()[0].0, int(-1));
    }

    #[test]
    fn unknown_element_reports_line() {
        let text = "[logic]\nelements 0 1 a\norder a c\n";
        assert_eq!(
            ModelFile::parse(text).unwrap_err(),
            ModelError::UnknownElement {
                line: 3,
                token: "c".into()
            }
        );
    }

    #[test]
    fn parse_errors() {
        let cases = [
            ("elements 0 1\n", 1),
            ("[logic]\nelements 0 1\n[state m]\n0 = x\n", 4),
            ("[logic]\nelements 0 1\nfoo\n", 3),
            ("[logic]\nelements 0 1\n[state m]\n1 = 1\n1 = 1\n", 5),
            ("[logic]\nelements 0 1\n[widget w]\n", 3),
            ("[logic]\nelements 0 1 a,b\n", 2),
            ("[state m]\n", 1),
        ];
        for (text, line) in cases {
            match ModelFile::parse(text).unwrap_err() {
                ModelError::Parse { line: l, .. } => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        assert_eq!(
            ModelFile::parse("[logic]\nelements 0 1\n[logic]\n").unwrap_err(),
            ModelError::DuplicateSection("logic".into())
        );
        assert_eq!(
            ModelFile::parse("[logic]\nelements 0 1\n[state m]\n[state m]\n").unwrap_err(),
            ModelError::DuplicateSection("state m".into())
        );
        assert_eq!(ModelFile::parse("# nothing\n").unwrap_err(), ModelError::MissingLogic);
    }

    #[test]
    fn missing_values_are_reported() {
        let text = "[logic]\nelements 0 1 a a'\ncomplement a a'\n[state m]\na = 1/2\n";
        let model = ModelFile::parse(text).unwrap();
        let logic = model.build_logic().unwrap();
        let err = model.state(&logic, "m").unwrap_err();
        assert!(matches!(err, ModelError::MissingValue { .. }));
        assert!(!err.is_parse_error());
        assert!(matches!(
            model.smap(&logic, "p").unwrap_err(),
            ModelError::MissingSection(_)
        ));
    }

    #[test]
    fn cond_system_is_closed_from_conditioning_tokens() {
        // a < 1 puts the relative complement a' into the system
        let text = "\
[logic]
elements 0 1 a a'
complement a a'
[cond f]
a | a = 1
a' | a = 0
a | 1 = 1/2
a' | 1 = 1/2
";
        let model = ModelFile::parse(text).unwrap();
        let logic = model.build_logic().unwrap();
        match model.conditional(&logic, "f").unwrap_err() {
            ModelError::MissingValue { entry, .. } => assert_eq!(entry, "`a | a'`"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn print_parse_roundtrip() {
        let model = ModelFile::parse(SMALL).unwrap();
        let again = ModelFile::parse(&model.to_string()).unwrap();
        assert_eq!(model, again);
    }

    #[test]
    fn rendered_sections_reparse() {
        let model = ModelFile::parse(SMALL).unwrap();
        let logic = model.build_logic().unwrap();
        let m = model.state(&logic, "m").unwrap();
        let x = model.observable(&logic, "x").unwrap();
        let text = format!(
            "{}\n{}\n{}",
            render_logic(&logic),
            render_state("m", &m),
            render_observable("x", &x)
        );
        let again = ModelFile::parse(&text).unwrap();
        let logic2 = again.build_logic().unwrap();
        assert_eq!(*logic2, *logic);
        assert_eq!(again.state(&logic2, "m").unwrap().values(), m.values());
        assert_eq!(again.observable(&logic2, "x").unwrap().assignment(), x.assignment());
    }
}
