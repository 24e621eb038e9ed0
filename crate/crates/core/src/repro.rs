//! Builtin fixtures for the two six-element worked examples, each paired with
//! the full set of numbers it is expected to produce.

use crate::model::{ModelError, ModelFile};
use crate::observable::StatsReport;
use crate::rational::{self, parse, Rational};
use crate::smap::{SMap, SMapError, Side};
use crate::{DiscreteObservable, QuantumLogic};
use std::fmt;
use std::sync::Arc;

pub const EXAMPLE_21: &str = include_str!("../fixtures/example21.qlm");
pub const EXAMPLE_22_PRINTED: &str = include_str!("../fixtures/example22_printed.qlm");
pub const EXAMPLE_22_CORRECTED: &str = include_str!("../fixtures/example22_corrected.qlm");

/// Tolerance on the three-digit correlation magnitude.
pub const PRINTED_CORRELATION_TOLERANCE: f64 = 5e-4;

/// `-0.4 / sqrt(0.96 * 5.25)`
const R_YX: f64 = -0.178_174_161_274_950;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReproId {
    Example21,
    Example22Printed,
    Example22Corrected,
}

impl ReproId {
    pub const ALL: [ReproId; 3] = [
        ReproId::Example21,
        ReproId::Example22Printed,
        ReproId::Example22Corrected,
    ];

    pub fn parse(s: &str) -> Option<Self> {
        ReproId::ALL.into_iter().find(|id| id.as_str() == s)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ReproId::Example21 => "2.1",
            ReproId::Example22Printed => "2.2-printed",
            ReproId::Example22Corrected => "2.2-corrected",
        }
    }

    pub fn fixture(self) -> &'static str {
        match self {
            ReproId::Example21 => EXAMPLE_21,
            ReproId::Example22Printed => EXAMPLE_22_PRINTED,
            ReproId::Example22Corrected => EXAMPLE_22_CORRECTED,
        }
    }
}

impl fmt::Display for ReproId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReproLine {
    pub label: String,
    pub expected: String,
    pub computed: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReproReport {
    pub id: ReproId,
    pub lines: Vec<ReproLine>,
}

impl ReproReport {
    pub fn passed(&self) -> bool {
        !self.lines.is_empty() && self.lines.iter().all(|l| l.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReproLine> {
        self.lines.iter().filter(|l| !l.ok)
    }

    fn push(&mut self, label: impl Into<String>, expected: impl Into<String>, computed: impl Into<String>, ok: bool) {
        self.lines.push(ReproLine {
            label: label.into(),
            expected: expected.into(),
            computed: computed.into(),
            ok,
        });
    }

    fn exact(&mut self, label: impl Into<String>, expected: &str, computed: &Rational) {
        let want = parse(expected).expect("pinned value parses");
        self.push(
            label,
            rational::display(&want),
            rational::display(computed),
            *computed == want,
        );
    }

    fn flag(&mut self, label: impl Into<String>, expected: bool, computed: bool) {
        self.push(label, expected.to_string(), computed.to_string(), expected == computed);
    }

    fn float(&mut self, label: impl Into<String>, expected: f64, computed: Option<f64>, tol: f64) {
        let ok = computed.is_some_and(|r| (r - expected).abs() <= tol);
        let shown = computed.map_or("undefined".to_string(), rational::float9);
        self.push(label, format!("{} ± {tol:e}", rational::float9(expected)), shown, ok);
    }

    fn error(&mut self, label: impl Into<String>, expected: impl Into<String>, err: impl fmt::Display) {
        self.push(label, expected, format!("error: {err}"), false);
    }
}

/// Runs the full pipeline on a builtin fixture.
pub fn run(id: ReproId) -> ReproReport {
    let mut report = ReproReport { id, lines: Vec::new() };
    let model = match ModelFile::parse(id.fixture()) {
        Ok(m) => m,
        Err(e) => {
            report.error("fixture parses", "ok", e);
            return report;
        }
    };
    let logic = match model.build_logic() {
        Ok(l) => l,
        Err(e) => {
            report.error("logic", "valid", e);
            return report;
        }
    };
    match id {
        ReproId::Example21 => example21(&mut report, &model, &logic),
        ReproId::Example22Printed => example22_printed(&mut report, &model, &logic),
        ReproId::Example22Corrected => example22_corrected(&mut report, &model, &logic),
    }
    report
}

const NAMES: [&str; 4] = ["a", "a'", "b", "b'"];

const TABLE_21: [[&str; 4]; 4] = [
    ["0.4", "0", "0.12", "0.28"],
    ["0", "0.6", "0.18", "0.42"],
    ["0.08", "0.22", "0.3", "0"],
    ["0.32", "0.38", "0", "0.7"],
];

fn observables(
    report: &mut ReproReport,
    model: &ModelFile,
    logic: &Arc<QuantumLogic>,
) -> Option<(DiscreteObservable, DiscreteObservable)> {
    let x = model.observable(logic, "x");
    let y = model.observable(logic, "y");
    match (x, y) {
        (Ok(x), Ok(y)) => Some((x, y)),
        (Err(e), _) | (_, Err(e)) => {
            report.error("observables x, y", "valid", e);
            None
        }
    }
}

fn common_stats(report: &mut ReproReport, s: &StatsReport) {
    report.exact("ν(x)", "0.2", &s.mean_x);
    report.exact("ν(y)", "3.5", &s.mean_y);
    report.exact("c(x,x)", "0.96", &s.var_x);
    report.exact("c(y,y)", "5.25", &s.var_y);
    report.flag("x ↔ y", false, s.compatible);
}

fn example21(report: &mut ReproReport, model: &ModelFile, logic: &Arc<QuantumLogic>) {
    let f = match model.conditional(logic, "f") {
        Ok(f) => f,
        Err(e) => return report.error("conditional state f", "valid", e),
    };
    report.push("conditional state f", "valid", "valid", true);
    let p = match SMap::from_conditional(&f) {
        Ok(p) => p,
        Err(e) => return report.error("p_f", "valid s-map", e),
    };
    let e = |n: &str| logic.element(n).expect("fixture names");
    for (row, values) in NAMES.iter().zip(TABLE_21) {
        for (col, want) in NAMES.iter().zip(values) {
            report.exact(format!("p_f({row},{col})"), want, p.value(e(row), e(col)));
        }
    }
    match model.smap(logic, "p") {
        Ok(tab) => report.flag("p_f equals the tabulated p", true, tab == p),
        Err(e) => report.error("tabulated p", "valid", e),
    }
    match p.to_conditional() {
        Ok(back) => report.flag("f recovered from p_f", true, back == f),
        Err(e) => report.error("f recovered from p_f", "true", e),
    }

    let Some((x, y)) = observables(report, model, logic) else {
        return;
    };
    let s = StatsReport::compute(&p, &x, &y);
    let joint = [
        ("-1", "0", "0.12"),
        ("-1", "5", "0.28"),
        ("1", "0", "0.18"),
        ("1", "5", "0.42"),
    ];
    for (t, u, want) in joint {
        let got = s
            .joint_xy
            .get(&parse(t).unwrap(), &parse(u).unwrap())
            .cloned()
            .unwrap_or_default();
        report.exact(format!("p_xy({t},{u})"), want, &got);
    }
    let joint = [
        ("0", "-1", "0.08"),
        ("0", "1", "0.22"),
        ("5", "-1", "0.32"),
        ("5", "1", "0.38"),
    ];
    for (t, u, want) in joint {
        let got = s
            .joint_yx
            .get(&parse(t).unwrap(), &parse(u).unwrap())
            .cloned()
            .unwrap_or_default();
        report.exact(format!("p_yx({t},{u})"), want, &got);
    }
    common_stats(report, &s);
    report.exact("p(x,y)", "0.7", &s.moment_xy);
    report.exact("p(y,x)", "0.3", &s.moment_yx);
    report.exact("c(x,y)", "0", &s.cov_xy);
    report.exact("c(y,x)", "-0.4", &s.cov_yx);
    report.push(
        "r(x,y)",
        "0 exactly",
        s.corr_xy.map_or("undefined".to_string(), rational::float9),
        s.corr_xy == Some(0.0),
    );
    report.float(
        "|r(y,x)|",
        0.178,
        s.corr_yx.map(f64::abs),
        PRINTED_CORRELATION_TOLERANCE,
    );
    report.flag("r(y,x) < 0", true, s.corr_yx.is_some_and(|r| r < 0.0));
    report.float("r(y,x)", R_YX, s.corr_yx, crate::checks::CORRELATION_TOLERANCE);
    report.flag("covariance matrix symmetric", false, s.matrix.is_symmetric());
    report.flag("p(a,b) = ν(a)ν(b)", true, p.is_independent_pair(e("a"), e("b")));
    report.flag("p(b,a) = ν(a)ν(b)", false, p.is_independent_pair(e("b"), e("a")));
    for (b, a, want) in [("a", "b", true), ("b", "a", false)] {
        let label = format!("f({b},1) = f({b},{a})");
        match f.is_independent(e(b), e(a), logic.one()) {
            Ok(got) => report.flag(label, want, got),
            Err(err) => report.error(label, want.to_string(), err),
        }
    }
}

fn example22_printed(report: &mut ReproReport, model: &ModelFile, logic: &Arc<QuantumLogic>) {
    let expected = SMapError::S3Violation {
        side: Side::Second,
        a: "b".into(),
        b: "b'".into(),
        c: "a".into(),
        joined: "2/5".into(),
        sum: "23/50".into(),
    };
    match model.smap(logic, "p") {
        Ok(_) => report.push("s-map p rejected", expected.to_string(), "accepted", false),
        Err(ModelError::SMap { source, .. }) => {
            let ok = *source == expected;
            report.push("s-map p rejected", expected.to_string(), source.to_string(), ok);
        }
        Err(e) => report.error("s-map p rejected", expected.to_string(), e),
    }
    let e = |n: &str| logic.element(n).expect("fixture names");
    let raw = |a: &str, b: &str| {
        model.smaps[0]
            .entries
            .iter()
            .find(|((x, y), _)| *x == e(a) && *y == e(b))
            .map(|(_, v)| v.clone())
            .unwrap_or_default()
    };
    report.exact("p(a,b) + p(a,b')", "0.46", &(raw("a", "b") + raw("a", "b'")));
    report.exact("p(a,a)", "0.4", &raw("a", "a"));
}

fn example22_corrected(report: &mut ReproReport, model: &ModelFile, logic: &Arc<QuantumLogic>) {
    let p = match model.smap(logic, "p") {
        Ok(p) => p,
        Err(e) => return report.error("s-map p", "valid", e),
    };
    report.push("s-map p", "valid", "valid", true);
    report.flag("p symmetric", true, p.is_symmetric());
    let Some((x, y)) = observables(report, model, logic) else {
        return;
    };
    let s = StatsReport::compute(&p, &x, &y);
    report.flag("p_xy = p_yx transposed", true, {
        let xy = &s.joint_xy;
        let yx = &s.joint_yx;
        xy.row_values
            .iter()
            .all(|t| xy.col_values.iter().all(|u| xy.get(t, u) == yx.get(u, t)))
    });
    common_stats(report, &s);
    report.exact("p(x,y)", "0.3", &s.moment_xy);
    report.exact("p(y,x)", "0.3", &s.moment_yx);
    report.exact("c(x,y)", "-0.4", &s.cov_xy);
    report.exact("c(y,x)", "-0.4", &s.cov_yx);
    let m = &s.matrix.entries;
    for ((i, j), want) in [((0, 0), "0.96"), ((0, 1), "-0.4"), ((1, 0), "-0.4"), ((1, 1), "5.25")] {
        report.exact(format!("matrix[{}][{}]", i + 1, j + 1), want, &m[i][j]);
    }
    report.flag("covariance matrix symmetric", true, s.matrix.is_symmetric());
    report.float("r(x,y)", R_YX, s.corr_xy, crate::checks::CORRELATION_TOLERANCE);
    report.float("r(y,x)", R_YX, s.corr_yx, crate::checks::CORRELATION_TOLERANCE);
}
