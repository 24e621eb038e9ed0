use clap::{Parser, Subcommand, ValueEnum};
use qlogic::checks::{self, SuiteReport};
use qlogic::generate::LatticeFamily;
use qlogic::model::{self, ModelError, ModelFile, SectionKind};
use qlogic::observable::JointDistribution;
use qlogic::rational::{display, float9, fraction};
use qlogic::repro::{self, ReproId};
use qlogic::{DiscreteObservable, Element, ObservableError, QuantumLogic, Rational, SMap, StatsReport};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qlogic", version, about = "Exact computations on finite quantum logics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate every section of a model file.
    Validate { file: PathBuf },
    /// Convert a conditional state to an s-map or back.
    Derive {
        file: PathBuf,
        #[arg(long, value_enum)]
        from: Direction,
        #[arg(long)]
        name: String,
    },
    /// Joint statistics of two observables under an s-map.
    Stats {
        file: PathBuf,
        #[arg(long)]
        smap: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Emit a random model on a standard lattice.
    Gen {
        /// boolean, mo or hsum
        family: String,
        /// Size, or comma-separated atoms per block for hsum.
        n: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the property suite and the compatibility oracle.
    Check {
        family: String,
        n: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Recompute a builtin example and diff against its expected numbers.
    Repro {
        #[arg(value_parser = ["2.1", "2.2-printed", "2.2-corrected"])]
        id: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Cond,
    Smap,
}

/// Exit 1: a model or check failed. Exit 2: input could not be read or parsed.
enum Failure {
    Invalid(String),
    Usage(String),
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        if e.is_parse_error() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { file } => validate(&file),
        Command::Derive { file, from, name } => derive(&file, from, &name),
        Command::Stats { file, smap, x, y } => stats(&file, &smap, &x, &y),
        Command::Gen { family, n, seed } => gen(&family, &n, seed),
        Command::Check {
            family,
            n,
            trials,
            seed,
        } => check(&family, &n, trials, seed),
        Command::Repro { id } => run_repro(&id),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn validate(path: &std::path::Path) -> Result<(), Failure> {
    let model = ModelFile::read(path)?;
    let logic = model.build_logic()?;
    println!("[logic] ok: {} elements", logic.len());
    let mut failed = 0;
    for (kind, name) in model.section_names() {
        let outcome = match kind {
            SectionKind::State => model.state(&logic, &name).map(|_| String::new()),
            SectionKind::Cond => model.conditional(&logic, &name).map(|f| {
                let c = f.coverage();
                let note = if c.truncated { ", truncated" } else { "" };
                format!(" ({} orthogonal families checked{note})", c.families_checked)
            }),
            SectionKind::SMap => model.smap(&logic, &name).map(|_| String::new()),
            SectionKind::Observable => model.observable(&logic, &name).map(|_| String::new()),
        };
        let header = format!("[{} {name}]", keyword(kind));
        match outcome {
            Ok(note) => println!("{header} ok{note}"),
            Err(e) => {
                failed += 1;
                println!("{header} FAIL");
                eprintln!("{e}");
            }
        }
    }
    if failed > 0 {
        return Err(Failure::Invalid(format!("{failed} section(s) failed validation")));
    }
    Ok(())
}

fn keyword(kind: SectionKind) -> &'static str {
    match kind {
        SectionKind::State => "state",
        SectionKind::Cond => "cond",
        SectionKind::SMap => "smap",
        SectionKind::Observable => "observable",
    }
}

fn derive(path: &std::path::Path, from: Direction, name: &str) -> Result<(), Failure> {
    let model = ModelFile::read(path)?;
    let logic = model.build_logic()?;
    let text = match from {
        Direction::Cond => {
            let f = model.conditional(&logic, name)?;
            let p = SMap::from_conditional(&f).map_err(|e| Failure::Invalid(e.to_string()))?;
            model::render_smap(&format!("p_{name}"), &p)
        }
        Direction::Smap => {
            let p = model.smap(&logic, name)?;
            let f = p.to_conditional().map_err(|e| Failure::Invalid(e.to_string()))?;
            model::render_conditional(&format!("f_{name}"), &f)
        }
    };
    print!("{text}");
    Ok(())
}

fn stats(path: &std::path::Path, smap: &str, xn: &str, yn: &str) -> Result<(), Failure> {
    let model = ModelFile::read(path)?;
    let logic = model.build_logic()?;
    let p = model.smap(&logic, smap)?;
    let x = model.observable(&logic, xn)?;
    let y = model.observable(&logic, yn)?;
    let s = StatsReport::compute(&p, &x, &y);
    for (label, r) in [("r(x,y)", s.corr_xy), ("r(y,x)", s.corr_yx)] {
        if r.is_none() {
            eprintln!("warning: {label} omitted: {}", ObservableError::DegenerateVariance);
        }
    }
    print!("{}", render_stats(&logic, &p, &x, &y, &s));
    Ok(())
}

fn render_joint(title: &str, j: &JointDistribution) -> String {
    let mut rows = vec![std::iter::once(title.to_string())
        .chain(j.col_values.iter().map(display))
        .collect::<Vec<_>>()];
    for (t, row) in j.row_values.iter().zip(&j.table) {
        rows.push(std::iter::once(display(t)).chain(row.iter().map(display)).collect());
    }
    align(&rows)
}

fn align(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
        writeln!(out, "  {}", cells.join("  ").trim_end()).unwrap();
    }
    out
}

fn pair_key(j: &JointDistribution) -> impl Iterator<Item = (String, &Rational)> {
    j.row_values.iter().zip(&j.table).flat_map(|(t, row)| {
        j.col_values
            .iter()
            .zip(row)
            .map(move |(u, v)| (format!("[{},{}]", fraction(t), fraction(u)), v))
    })
}

fn nontrivial_range(logic: &QuantumLogic, x: &DiscreteObservable) -> Vec<Element> {
    x.range().into_iter().filter(|e| !logic.is_bound(*e)).collect()
}

fn render_stats(
    logic: &QuantumLogic,
    p: &SMap,
    x: &DiscreteObservable,
    y: &DiscreteObservable,
    s: &StatsReport,
) -> String {
    let yes = |b: bool| if b { "yes" } else { "no" };
    let corr = |r: Option<f64>| r.map_or("undefined".to_string(), float9);
    let mut out = String::new();
    writeln!(out, "joint distribution p_x,y (rows x, columns y)").unwrap();
    out += &render_joint("x\\y", &s.joint_xy);
    writeln!(out, "joint distribution p_y,x (rows y, columns x)").unwrap();
    out += &render_joint("y\\x", &s.joint_yx);
    writeln!(out).unwrap();
    let exact = [
        ("ν(x)", &s.mean_x),
        ("ν(y)", &s.mean_y),
        ("p(x,y)", &s.moment_xy),
        ("p(y,x)", &s.moment_yx),
        ("c(x,y)", &s.cov_xy),
        ("c(y,x)", &s.cov_yx),
        ("c(x,x)", &s.var_x),
        ("c(y,y)", &s.var_y),
    ];
    let mut rows: Vec<Vec<String>> = exact
        .iter()
        .map(|(k, v)| vec![k.to_string(), "=".into(), fraction(v), display(v)])
        .collect();
    rows.push(vec!["r(x,y)".into(), "≈".into(), String::new(), corr(s.corr_xy)]);
    rows.push(vec!["r(y,x)".into(), "≈".into(), String::new(), corr(s.corr_yx)]);
    out += &align(&rows);
    writeln!(out, "\ncovariance matrix").unwrap();
    let m = &s.matrix.entries;
    out += &align(&m.iter().map(|r| r.iter().map(display).collect()).collect::<Vec<_>>());
    writeln!(out, "symmetric: {}", yes(s.matrix.is_symmetric())).unwrap();
    writeln!(out, "x ↔ y: {}", yes(s.compatible)).unwrap();

    let mut indep = Vec::new();
    let name = |e: Element| logic.name(e);
    for a in nontrivial_range(logic, x) {
        for b in nontrivial_range(logic, y) {
            for (u, v) in [(a, b), (b, a)] {
                indep.push((format!("{},{}", name(u), name(v)), p.is_independent_pair(u, v)));
            }
        }
    }
    if !indep.is_empty() {
        writeln!(out, "\nindependence p(u,v) = ν(u)ν(v)").unwrap();
        let rows: Vec<Vec<String>> = indep
            .iter()
            .map(|(k, v)| vec![format!("({k})"), yes(*v).to_string()])
            .collect();
        out += &align(&rows);
    }

    writeln!(out, "\n--- machine ---").unwrap();
    for (k, v) in [
        ("nu_x", &s.mean_x),
        ("nu_y", &s.mean_y),
        ("p_xy", &s.moment_xy),
        ("p_yx", &s.moment_yx),
        ("c_xy", &s.cov_xy),
        ("c_yx", &s.cov_yx),
        ("var_x", &s.var_x),
        ("var_y", &s.var_y),
    ] {
        writeln!(out, "{k}={}", fraction(v)).unwrap();
    }
    for (k, r) in [("r_xy", s.corr_xy), ("r_yx", s.corr_yx)] {
        if let Some(r) = r {
            writeln!(out, "{k}={}", float9(r)).unwrap();
        }
    }
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            writeln!(out, "matrix[{}][{}]={}", i + 1, j + 1, fraction(v)).unwrap();
        }
    }
    writeln!(out, "matrix_symmetric={}", s.matrix.is_symmetric()).unwrap();
    writeln!(out, "compatible={}", s.compatible).unwrap();
    for (k, v) in pair_key(&s.joint_xy) {
        writeln!(out, "joint_xy{k}={}", fraction(v)).unwrap();
    }
    for (k, v) in pair_key(&s.joint_yx) {
        writeln!(out, "joint_yx{k}={}", fraction(v)).unwrap();
    }
    for (k, v) in &indep {
        writeln!(out, "independent[{k}]={v}").unwrap();
    }
    out
}

fn family(name: &str, n: &str) -> Result<qlogic::generate::HorizontalSum, Failure> {
    LatticeFamily::parse(name, n)
        .and_then(|f| f.build())
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn gen(name: &str, n: &str, seed: u64) -> Result<(), Failure> {
    let hs = family(name, n)?;
    let p = hs.random_smap(seed).map_err(|e| Failure::Invalid(e.to_string()))?;
    let mut out = format!("# {name} {n}, seed {seed}\n");
    out += &model::render_logic(hs.logic());
    out += "\n";
    out += &model::render_smap("p", &p);
    for (i, x) in hs.random_block_observables(seed).iter().enumerate() {
        out += "\n";
        out += &model::render_observable(&format!("x{}", i + 1), x);
    }
    print!("{out}");
    Ok(())
}

fn check(name: &str, n: &str, trials: usize, seed: u64) -> Result<(), Failure> {
    let hs = family(name, n)?;
    let logic = hs.logic();
    let suite = checks::roundtrip_suite(&hs, trials, seed).map_err(|e| Failure::Invalid(e.to_string()))?;
    let SuiteReport {
        trials,
        passed,
        failed,
        symmetric,
        ref first_counterexample,
    } = suite;
    println!("lattice: {name} {n}, {} elements", logic.len());
    println!("trials={trials} passed={passed} failed={failed} symmetric={symmetric}");
    if let Some(c) = first_counterexample {
        println!("first counterexample: {c}");
    }
    let mut ok = suite.all_passed();
    match checks::compatibility_oracle(logic) {
        Ok(disagreements) => {
            let pairs = logic.len() * logic.len();
            println!("oracle: {}/{pairs} pairs agree", pairs - disagreements.len());
            for d in disagreements.iter().take(5) {
                println!("  {d}");
            }
            ok &= disagreements.is_empty();
        }
        Err(e) => println!("oracle: skipped ({e})"),
    }
    let identities = checks::lattice_identities(logic);
    println!(
        "lattice identities: {}",
        if identities.is_empty() { "ok" } else { "FAIL" }
    );
    ok &= identities.is_empty();
    if ok {
        Ok(())
    } else {
        Err(Failure::Invalid("check failed".into()))
    }
}

fn run_repro(id: &str) -> Result<(), Failure> {
    let id = ReproId::parse(id).ok_or_else(|| Failure::Usage(format!("unknown example `{id}`")))?;
    let report = repro::run(id);
    let rows: Vec<Vec<String>> = report
        .lines
        .iter()
        .map(|l| {
            let mark = if l.ok { "ok" } else { "DIFF" };
            vec![
                mark.into(),
                l.label.clone(),
                format!("expected {}", l.expected),
                format!("got {}", l.computed),
            ]
        })
        .collect();
    print!("{}", align_left(&rows));
    let good = report.lines.iter().filter(|l| l.ok).count();
    println!("repro {id}: {good}/{} match", report.lines.len());
    if report.passed() {
        Ok(())
    } else {
        for l in report.failures() {
            eprintln!("- {}: expected {}", l.label, l.expected);
            eprintln!("+ {}: got {}", l.label, l.computed);
        }
        Err(Failure::Invalid(String::new()))
    }
}

fn align_left(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
        writeln!(out, "{}", cells.join("  ").trim_end()).unwrap();
    }
    out
}
