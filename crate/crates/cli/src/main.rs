//! `anharmonia`: run verification suites and build anharmonic equations
//! from the command line.

mod config;

use std::fs::File;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use anharmonia::algebra::ring::{parse_q, q_to_string, Q};
use anharmonia::anharmonic::{degree_table, run_pipeline, AnharmonicSpec};
use anharmonia::binform::{fourth_transvectant, klein_form, omega_transvectant, BinaryForm, KleinKind};
use anharmonia::darboux::{n2_impossibility, run_case};
use anharmonia::mobius::{group_catalog, invariant_psi, verify_invariance, GroupKind};
use anharmonia::numeric::{cross_ratio_drift, p0_series, rk4_integrate, OdeSystem, Tolerances, P0_PATH};
use anharmonia::qseries::ModularRegistry;
use anharmonia::report::{Check, Report};
use anharmonia::schwarz::{
    bridge_search, curve_verify, degree_triple, exponent_data, hypergeom_potential, platonic_name, platonic_order,
    show_ratfun, PlatonicOrder,
};
use anharmonia::suite::{run_suite, SuiteName};
use num_complex::Complex64;

use config::{resolve, FileConfig, FlagValues, Settings};

#[derive(Parser, Debug)]
#[command(
    name = "anharmonia",
    version,
    about = "Exact checks for anharmonic Riccati equations and the identities around them"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized property checks (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Series truncation order.
    #[arg(long, global = true)]
    order: Option<u32>,
    /// Override floating-point tolerances.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Random cases per property check (default 100).
    #[arg(long, global = true)]
    cases: Option<usize>,
    /// RK4 steps for numeric checks (default 4000).
    #[arg(long, global = true)]
    steps: Option<usize>,
    /// Record wall time per block.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print q-expansions of the modular series.
    Series {
        /// Series names (E2, E4, E6, Delta, theta2_4, theta3_4, theta4_4, lambda, e1, e2, e3) or `all`.
        #[arg(default_value = "all")]
        names: Vec<String>,
    },
    /// Finite Möbius groups and their invariants.
    Mobius {
        #[command(subcommand)]
        cmd: MobiusCmd,
    },
    /// Build U, F(x, T) and the Riccati equation for one group.
    Anharmonic {
        /// cyclic, dihedral, tetra, octa or ico (or `cyclic:5`, `dih:3`).
        #[arg(long)]
        group: String,
        /// Group parameter for cyclic and dihedral groups.
        #[arg(long)]
        m: Option<u32>,
        /// Degree n; inferred from p when omitted.
        #[arg(long)]
        n: Option<u32>,
        /// Stabilizer order p.
        #[arg(long, default_value_t = 1)]
        p: u32,
        /// Comma-separated subset of U, F, riccati.
        #[arg(long, default_value = "U,F,riccati")]
        emit: String,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Transvectants of binary forms in the binomial convention.
    Transvect {
        #[command(subcommand)]
        cmd: Option<TransvectCmd>,
        /// Coefficients a0,...,an of f = (a0, ..., an)(x, y)^n.
        #[arg(long)]
        form: Option<String>,
        /// Second form; defaults to the first.
        #[arg(long)]
        with: Option<String>,
        #[arg(long, default_value_t = 4)]
        r: usize,
    },
    /// Darboux-polynomial battery for one degree.
    Darboux {
        #[arg(long)]
        n: usize,
        /// `all` or a substring of the check names (cofactor, tau4, beta, ...).
        #[arg(long, default_value = "all")]
        check: String,
    },
    /// Run a named suite (same as `suite`).
    Verify {
        suite: String,
        #[arg(long)]
        explore: bool,
    },
    /// RK4 diagnostics.
    Numeric {
        #[command(subcommand)]
        cmd: Option<NumericCmd>,
    },
    /// Schwarzian reduction and hypergeometric bookkeeping.
    Schwarz {
        #[command(subcommand)]
        cmd: SchwarzCmd,
    },
    /// Run a named suite: modular, anharmonic, darboux, transvect, schwarz, numeric or all.
    Suite {
        #[arg(default_value = "all")]
        name: String,
        /// Include exploratory searches.
        #[arg(long)]
        explore: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum MobiusCmd {
    /// Check Ψ∘g = Ψ for the generators (and every element with --all).
    Verify {
        #[arg(long)]
        group: String,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        all: bool,
    },
}

#[derive(Subcommand, Debug)]
enum TransvectCmd {
    /// The Klein/Wedekind forms and their fourth transvectants.
    Klein {
        /// deg1[:k], deg2[:k], tet, oct or ico.
        #[arg(long)]
        kind: String,
        /// Fail unless the fourth transvectant vanishes.
        #[arg(long)]
        check: bool,
    },
}

#[derive(Subcommand, Debug)]
enum NumericCmd {
    /// Cross-ratio drift of four Riccati solutions.
    CrossRatio {
        /// `p0` (q = (3/4)℘₀) or `free` (q = 0).
        #[arg(long, default_value = "p0")]
        potential: String,
        #[arg(long, default_value = "4")]
        g3: String,
        /// Write the trajectory to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum SchwarzCmd {
    /// Verify the reduced equianharmonic potential; symbolic a when omitted.
    Curve {
        #[arg(long)]
        a: Option<String>,
    },
    /// Order of the finite group with the given local monodromy orders.
    Platonic {
        /// k0,k1,kinf
        #[arg(long)]
        k: String,
    },
    /// Exponent data for hypergeometric parameters a,b,c.
    Exponents {
        #[arg(long)]
        abc: String,
    },
    /// Hypergeometric potential for the degree-n triple.
    Hypergeom {
        #[arg(long)]
        n: i64,
    },
    /// Search s = c·ξ^k carrying the hypergeometric potential to the reduced one.
    Bridge {
        #[arg(long)]
        n: i64,
    },
}

/// What a command produced.
struct Outcome {
    text: String,
    json: Value,
    passed: bool,
}

impl Outcome {
    fn report(r: Report) -> Self {
        let r = r.sorted();
        Outcome { text: r.to_text(), json: serde_json::to_value(&r).expect("report serializes"), passed: r.passed() }
    }

    fn info(text: String, json: Value) -> Self {
        Outcome { text, json, passed: true }
    }
}

/// Errors in user input; these exit with status 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn parse_rational(s: &str) -> Result<Q, Usage> {
    parse_q(s.trim()).ok_or_else(|| Usage(format!("not a rational number: {s:?}")))
}

fn parse_list(s: &str) -> Result<Vec<Q>, Usage> {
    s.split(',').map(parse_rational).collect()
}

fn parse_group(group: &str, m: Option<u32>) -> Result<GroupKind, Usage> {
    Ok(if group.contains(':') { group.parse()? } else { GroupKind::parse(group, m)? })
}

fn cmd_series(names: &[String], s: &Settings) -> Result<Outcome, Usage> {
    let order = s.suite.order.unwrap_or(16);
    let reg = ModularRegistry::new(order)?;
    let names: Vec<&str> = if names.iter().any(|n| n == "all") {
        ModularRegistry::NAMES.to_vec()
    } else {
        names.iter().map(String::as_str).collect()
    };
    let mut text = String::new();
    let mut out = serde_json::Map::new();
    for name in names {
        let series = reg.get(name)?;
        text.push_str(&format!("{name} = {series}\n"));
        out.insert(name.to_string(), series.to_json());
    }
    Ok(Outcome::info(text, Value::Object(out)))
}

fn cmd_anharmonic(
    group: &str,
    m: Option<u32>,
    n: Option<u32>,
    p: u32,
    emit: &str,
    s: &Settings,
) -> Result<Outcome, Usage> {
    let kind = parse_group(group, m)?;
    let n = match n {
        Some(n) => n,
        None => degree_table(kind)
            .into_iter()
            .find(|r| r.p == p)
            .map(|r| r.n)
            .ok_or_else(|| Usage(format!("no admissible degree with p = {p} for {}", kind.name())))?,
    };
    let spec = AnharmonicSpec::new(kind, n, p)?;
    let res = run_pipeline(spec, &s.suite.pipeline())?;
    let emit: Vec<&str> = emit.split(',').map(str::trim).collect();
    if let Some(bad) = emit.iter().find(|e| !["U", "F", "riccati"].contains(e)) {
        return Err(Usage(format!("unknown --emit item {bad:?} (expected U, F, riccati)")));
    }
    let mut json = res.to_json();
    for key in ["U", "F", "riccati"] {
        if !emit.contains(&key) {
            json.as_object_mut().expect("object").remove(key);
        }
    }
    let report = res.report.clone().sorted();
    json["report"] = serde_json::to_value(&report).expect("report serializes");
    let text = format!("{}{}", res.to_text(&emit), report.to_text());
    Ok(Outcome { text, json, passed: report.passed() })
}

fn cmd_transvect(
    cmd: &Option<TransvectCmd>,
    form: &Option<String>,
    with: &Option<String>,
    r: usize,
) -> Result<Outcome, Usage> {
    if let Some(TransvectCmd::Klein { kind, check }) = cmd {
        let kind: KleinKind = kind.parse()?;
        let f = klein_form(kind)?;
        let t4 = fourth_transvectant(&f.dehomogenize(), f.degree())?;
        let plain: Vec<String> = f.plain().iter().map(q_to_string).collect();
        let t4s: Vec<String> = t4.coeffs().iter().map(q_to_string).collect();
        let text = format!("{}: f = {:?} (x^n first)\n(f,f)^4 dehomogenized = {:?}\n", kind.name(), plain, t4s);
        let json = json!({ "kind": kind.name(), "form_plain": plain, "fourth_transvectant": t4s });
        if *check {
            let mut rep = Report::new("transvect");
            let residual = (!t4.is_zero()).then(|| (format!("{} nonzero coefficients", t4.coeffs().len()), None));
            rep.push(Check::exact(format!("wedekind/{}", kind.name()), residual));
            let mut out = Outcome::report(rep);
            out.text = format!("{text}{}", out.text);
            out.json = json!({ "kind": kind.name(), "fourth_transvectant": t4s, "report": out.json });
            return Ok(out);
        }
        return Ok(Outcome::info(text, json));
    }
    let f = BinaryForm::new(parse_list(form.as_deref().ok_or_else(|| Usage("--form is required".into()))?)?);
    let g = match with {
        Some(w) => BinaryForm::new(parse_list(w)?),
        None => f.clone(),
    };
    let t = omega_transvectant(&f, &g, r)?;
    let coeffs: Vec<String> = t.coeffs().iter().map(q_to_string).collect();
    let plain: Vec<String> = t.plain().iter().map(q_to_string).collect();
    let text =
        format!("(f,g)^{r}: degree {}\nbinomial convention: {coeffs:?}\nplain (x^n first): {plain:?}\n", t.degree());
    Ok(Outcome::info(text, json!({ "r": r, "degree": t.degree(), "coeffs": coeffs, "plain": plain })))
}

fn cmd_darboux(n: usize, check: &str) -> Result<Outcome, Usage> {
    if n == 2 {
        let mut rep = Report::new("darboux");
        rep.push(n2_impossibility());
        return Ok(Outcome::report(rep));
    }
    let case = run_case(n)?;
    let mut rep = case.report.clone();
    if check != "all" {
        rep.checks.retain(|c| c.name.contains(check));
        if rep.checks.is_empty() {
            return Err(Usage(format!("no check matches {check:?}")));
        }
    }
    let rep = rep.sorted();
    let mut json = case.to_json();
    json["report"] = serde_json::to_value(&rep).expect("report serializes");
    let header = format!(
        "n = {n}: {}\na = {}  alpha = {}  k = {}  beta = {}\n",
        json["constraint"].as_str().unwrap_or(""),
        json["a"],
        json["alpha"],
        json["k"],
        json["beta"]
    );
    Ok(Outcome { text: format!("{header}{}", rep.to_text()), json, passed: rep.passed() })
}

fn cmd_cross_ratio(potential: &str, g3: &str, csv: &Option<PathBuf>, s: &Settings) -> Result<Outcome, Usage> {
    let g3 = parse_rational(g3)?;
    let steps = s.suite.steps;
    let tol = s.suite.tol.unwrap_or(Tolerances::default().cross_ratio);
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let p0 = p0_series(&g3, 120)?;
    let p0_ref = &p0;
    let (sys, ics, z0, z1) = match potential {
        "p0" => (
            OdeSystem::riccati(4, "u'=(3/4)p0-u^2", move |z| [0.75 * p0_ref.eval(z).0, zero, -one]),
            [Complex64::new(0.5, 0.2), Complex64::new(-0.7, 0.1), Complex64::new(1.1, -0.4), Complex64::new(0.2, 0.9)],
            P0_PATH.0,
            P0_PATH.1,
        ),
        "free" => (
            OdeSystem::riccati(4, "u'=-u^2", |_| [zero, zero, -one]),
            [1.0, 2.0, 3.0, 4.0].map(|x| Complex64::new(x, 0.0)),
            zero,
            one,
        ),
        other => return Err(Usage(format!("unknown potential {other:?} (expected p0 or free)"))),
    };
    let drift = cross_ratio_drift(&sys, ics, z0, z1, steps)?;
    if let Some(path) = csv {
        let traj = rk4_integrate(&sys, &ics, z0, z1, steps)?;
        traj.write_csv(File::create(path)?)?;
    }
    let mut rep = Report::new("numeric");
    rep.push(Check::numeric(format!("cross_ratio/{potential}"), drift, tol).with_detail(format!("steps {steps}")));
    Ok(Outcome::report(rep))
}

fn cmd_schwarz(cmd: &SchwarzCmd) -> Result<Outcome, Usage> {
    match cmd {
        SchwarzCmd::Curve { a } => {
            let a = a.as_deref().map(parse_rational).transpose()?;
            Ok(Outcome::report(curve_verify(a.as_ref())?))
        }
        SchwarzCmd::Platonic { k } => {
            let ks: Vec<i64> = k
                .split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| Usage(format!("bad order {x:?}"))))
                .collect::<Result<_, _>>()?;
            let [k0, k1, ki] = ks[..] else {
                return Err(Usage("--k needs exactly three orders".into()));
            };
            let order = platonic_order(k0, k1, ki)?;
            let n = match &order {
                PlatonicOrder::Finite(n) => q_to_string(n),
                PlatonicOrder::Infinite => "infinite".into(),
            };
            let name = platonic_name([k0, k1, ki]);
            let text = format!("({k0},{k1},{ki}) -> N = {n}{}\n", name.map(|s| format!(" ({s})")).unwrap_or_default());
            Ok(Outcome::info(text, json!({ "k": [k0, k1, ki], "N": n, "group": name })))
        }
        SchwarzCmd::Exponents { abc } => {
            let v = parse_list(abc)?;
            let [a, b, c] = &v[..] else {
                return Err(Usage("--abc needs exactly three values".into()));
            };
            let e = exponent_data(a, b, c);
            let j = e.to_json();
            let text =
                format!(
                "lambda = {}  mu = {}  nu = {}\nmu0 = {}  mu1 = {}  mu_inf = {}\nk0 = {}  k1 = {}  k_inf = {}\n{}\n",
                j["lambda"], j["mu"], j["nu"], j["mu0"], j["mu1"], j["mu_inf"], j["k0"], j["k1"], j["k_inf"],
                if e.mu1_matches_mu() { "mu1 agrees with mu" } else { "note: mu1 = c - a - b differs from mu" }
            );
            Ok(Outcome::info(text, j))
        }
        SchwarzCmd::Hypergeom { n } => {
            let (l, m, v) = degree_triple(*n)?;
            let pot = hypergeom_potential(&l, &m, &v);
            let shown = show_ratfun(&pot, "s");
            let triple = [q_to_string(&l), q_to_string(&m), q_to_string(&v)];
            Ok(Outcome::info(
                format!("(lambda, mu, nu) = {triple:?}\nQ(s) = {shown}\n"),
                json!({ "triple": triple, "Q": shown }),
            ))
        }
        SchwarzCmd::Bridge { n } => {
            let hits = bridge_search(*n)?;
            let list: Vec<String> = hits.iter().map(|(c, k)| format!("s = {}*xi^{k}", q_to_string(c))).collect();
            let text =
                if list.is_empty() { "no substitution s = c*xi^k found\n".to_string() } else { list.join("\n") + "\n" };
            Ok(Outcome::info(text, json!({ "n": n, "matches": list })))
        }
    }
}

fn run(cli: &Cli, s: &Settings) -> Result<Outcome, Usage> {
    match &cli.cmd {
        Command::Series { names } => cmd_series(names, s),
        Command::Mobius { cmd: MobiusCmd::Verify { group, m, all } } => {
            let kind = parse_group(group, *m)?;
            let g = group_catalog(kind)?;
            Ok(Outcome::report(verify_invariance(&g, &invariant_psi(kind), *all)))
        }
        Command::Anharmonic { group, m, n, p, emit, .. } => cmd_anharmonic(group, *m, *n, *p, emit, s),
        Command::Transvect { cmd, form, with, r } => cmd_transvect(cmd, form, with, *r),
        Command::Darboux { n, check } => cmd_darboux(*n, check),
        Command::Verify { suite, explore } | Command::Suite { name: suite, explore } => {
            let name: SuiteName = suite.parse()?;
            let opts = anharmonia::suite::SuiteOptions { explore: *explore, ..s.suite.clone() };
            Ok(Outcome::report(run_suite(name, &opts)?))
        }
        Command::Numeric { cmd: None } => {
            let opts = anharmonia::suite::SuiteOptions { ..s.suite.clone() };
            Ok(Outcome::report(run_suite(SuiteName::Numeric, &opts)?))
        }
        Command::Numeric { cmd: Some(NumericCmd::CrossRatio { potential, g3, csv }) } => {
            cmd_cross_ratio(potential, g3, csv, s)
        }
        Command::Schwarz { cmd } => cmd_schwarz(cmd),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let file = match FileConfig::from_env() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let flags = FlagValues {
        seed: cli.seed,
        cases: cli.cases,
        order: cli.order,
        tol: cli.tol,
        steps: cli.steps,
        json: cli.json,
        timing: cli.timing,
    };
    let mut settings = resolve(&flags, &file);
    if let Command::Anharmonic { format: Some(f), .. } = &cli.cmd {
        settings.json = matches!(f, Format::Json);
    }
    if let Err(e) = settings.suite.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(&cli, &settings) {
        Ok(out) => {
            if settings.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json"));
            } else {
                print!("{}", out.text);
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
