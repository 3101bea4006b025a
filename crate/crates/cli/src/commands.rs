use std::f64::consts::PI;
use std::fmt;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use hyperon::dataio::{
    bundled_parameters, emit_table, format_sig, load_parameters, read_events, Cell, EventWriter,
    Format, ParameterRow, ParameterTable, Report, REPORT_DIGITS,
};
use hyperon::inequalities::{
    contextuality_value, equal_alpha_root, maximize_with, mermin_peres_scaled, threshold_with,
    InequalitySpec, OptimizerOptions, ProbModel, CLASSICAL_CONTEXTUALITY_BOUND,
    QUOTED_EQUAL_ALPHA_THRESHOLD,
};
use hyperon::interferometer::{asymmetric_intensity, InterferometerConfig, Port, SpinState};
use hyperon::mc::{generate_into, pair_up, Model, SampleConfig};
use hyperon::pairs::{correlation_estimate, witness_estimate, PairModel};
use hyperon::Vec3;

use crate::args::*;

/// Environment variable naming the default parameter file.
pub const PARAMS_ENV: &str = "HYPERON_PARAMS";

/// Bisection tolerance on the violation threshold.
const THRESHOLD_TOL: f64 = 1e-4;

#[derive(Debug)]
pub enum Failure {
    /// Bad flags or parameter values.
    Usage(String),
    /// Unreadable or invalid input data, or failed output.
    Data(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Data(m) => f.write_str(m),
        }
    }
}

fn usage(e: impl fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn data(e: impl fmt::Display) -> Failure {
    Failure::Data(e.to_string())
}

type Outcome = Result<(), Failure>;

pub fn run(cli: &Cli) -> Outcome {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t as usize)
            .build_global()
            .map_err(data)?;
    }
    let format = Format::from(cli.format);
    match &cli.command {
        Command::Table(p) => {
            let table = parameters(p)?;
            emit(cli, &emit_table(&table).render(format))
        }
        Command::Complementarity(a) => emit(cli, &complementarity(a)?.render(format)),
        Command::Simulate(s) => simulate(cli, s),
        Command::Analyze(Analyze::Witness(a)) => emit(cli, &witness(a)?.render(format)),
        Command::Analyze(Analyze::Correlations(a)) => emit(cli, &correlations(a)?.render(format)),
        Command::Bell(a) => emit(cli, &bell(a, cli.seed)?.render(format)),
        Command::Context(a) => emit(cli, &context(a)?.render(format)),
    }
}

fn emit(cli: &Cli, text: &str) -> Outcome {
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Data(format!("writing {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Data(format!("writing stdout: {e}")))
        }
    }
}

fn parameters(p: &ParamsArg) -> Result<ParameterTable, Failure> {
    let path: Option<PathBuf> = p.params.clone().or_else(|| {
        std::env::var_os(PARAMS_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    });
    let table = match path {
        Some(path) => load_parameters(&path).map_err(data)?,
        None => bundled_parameters(),
    };
    for w in &table.warnings {
        eprintln!("warning: {w}");
    }
    Ok(table)
}

fn lookup<'t>(table: &'t ParameterTable, key: &str) -> Result<&'t ParameterRow, Failure> {
    table.find(key).map_err(usage)
}

fn complementarity(a: &ComplementarityArgs) -> Result<Report, Failure> {
    let (source, splitting, chi_sp) = match &a.hyperon {
        Some(key) => {
            let table = parameters(&a.params)?;
            let row = lookup(&table, key)?;
            let amps = row.params.to_amplitudes();
            (row.name(), (amps.s.norm_sqr(), amps.p.norm_sqr()), row.params.chi_sp)
        }
        None => ("splitting".to_string(), a.splitting.unwrap_or((1.0, 1.0)), a.chi_sp * PI),
    };
    let cfg = InterferometerConfig::new(a.chi * PI, splitting, chi_sp).map_err(usage)?;
    let state = SpinState::mixed(a.theta * PI, a.phi * PI, a.purity).map_err(usage)?;
    let c = cfg.complementarity();
    let mut report = Report::new(&[
        "source",
        "weight_a",
        "weight_b",
        "chi_sp_pi",
        "visibility",
        "predictability",
        "sum_of_squares",
        "intensity_plus",
        "intensity_minus",
    ]);
    report.push(vec![
        Cell::Text(source),
        Cell::Num(splitting.0),
        Cell::Num(splitting.1),
        Cell::Num(chi_sp / PI),
        Cell::Num(c.visibility),
        Cell::Num(c.predictability),
        Cell::Num(c.sum_of_squares()),
        Cell::Num(asymmetric_intensity(&cfg, &state, Port::Plus)),
        Cell::Num(asymmetric_intensity(&cfg, &state, Port::Minus)),
    ]);
    Ok(report)
}

fn simulate(cli: &Cli, s: &Simulate) -> Outcome {
    let (model, events) = match s {
        Simulate::Single(a) => {
            let table = parameters(&a.params)?;
            let row = lookup(&table, &a.hyperon)?;
            let model = Model::Single {
                channel: row.name(),
                params: row.params,
                polarization: a.pol,
            };
            (model, a.events.events)
        }
        Simulate::Pair(a) => {
            let model = Model::Pair {
                channels: ("Lambda -> p pi-".into(), "Lambdabar -> pbar pi+".into()),
                k: a.k,
            };
            (model, a.events.events)
        }
        Simulate::Cascade(a) => {
            let table = parameters(&a.params)?;
            let (mu, nu) = (lookup(&table, &a.first)?, lookup(&table, &a.second)?);
            let model = Model::Cascade {
                channels: (mu.name(), nu.name()),
                mu: mu.params,
                nu: nu.params,
                polarization: a.pol,
            };
            (model, a.events.events)
        }
    };
    let config = SampleConfig {
        seed: cli.seed,
        events,
        model,
        workers: None,
    };
    config.validate().map_err(usage)?;
    match &cli.out {
        Some(path) => write_run(&config, EventWriter::create(path).map_err(data)?),
        None => {
            let out = BufWriter::new(std::io::stdout().lock());
            write_run(&config, EventWriter::new(out, "<stdout>").map_err(data)?)
        }
    }
}

fn write_run<W: Write>(config: &SampleConfig, mut writer: EventWriter<W>) -> Outcome {
    generate_into(config, |block| writer.write(block)).map_err(data)?;
    writer.finish().map(drop).map_err(data)
}

fn pair_events(path: &Path) -> Result<Vec<hyperon::mc::PairedEvent>, Failure> {
    let records = read_events(path).map_err(data)?;
    pair_up(&records).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn witness(a: &AnalyzeArgs) -> Result<Report, Failure> {
    let events = pair_events(&a.events)?;
    let w = witness_estimate(&events).map_err(data)?;
    let verdict = if w.value + 3.0 * w.std_error < 0.0 {
        "entangled"
    } else {
        "not detected"
    };
    let mut report = Report::new(&["events", "witness", "std_error", "verdict"]);
    report.push(vec![
        Cell::Int(events.len() as i64),
        Cell::Num(w.value),
        Cell::Num(w.std_error),
        Cell::text(verdict),
    ]);
    Ok(report)
}

fn correlations(a: &CorrelationArgs) -> Result<Report, Failure> {
    let model = PairModel::from_k(a.renormalize.unwrap_or(1.0)).map_err(usage)?;
    let events = pair_events(&a.input.events)?;
    let est = correlation_estimate(&events, &model, a.renormalize.is_some()).map_err(usage)?;
    let mut report = Report::new(&["i", "j", "value", "std_error", "renormalized"]);
    const AXES: [&str; 3] = ["x", "y", "z"];
    for i in 0..3 {
        for j in 0..3 {
            report.push(vec![
                Cell::text(AXES[i]),
                Cell::text(AXES[j]),
                Cell::Num(est.matrix[(i, j)]),
                Cell::Num(est.std_error[(i, j)]),
                Cell::Bool(est.renormalized),
            ]);
        }
    }
    Ok(report)
}

fn inequality(arg: InequalityArg) -> InequalitySpec {
    match arg {
        InequalityArg::I2 => InequalitySpec::i2(),
        InequalityArg::I3 => InequalitySpec::i3(),
        InequalityArg::I4 => InequalitySpec::i4(),
    }
}

/// `theta:phi` in degrees per setting, `;`-separated.
fn angles(dirs: &[Vec3]) -> String {
    dirs.iter()
        .map(|n| {
            let theta = n.z.clamp(-1.0, 1.0).acos().to_degrees();
            let phi = n.y.atan2(n.x).to_degrees();
            format!("{}:{}", format_sig(theta, REPORT_DIGITS), format_sig(phi, REPORT_DIGITS))
        })
        .collect::<Vec<_>>()
        .join(";")
}

fn bell(a: &BellArgs, seed: u64) -> Result<Report, Failure> {
    let spec = inequality(a.inequality);
    let opts = OptimizerOptions {
        seed,
        ..OptimizerOptions::default()
    };
    if a.threshold {
        let k = threshold_with(&spec, &opts, THRESHOLD_TOL).map_err(data)?;
        let mut report = Report::new(&["inequality", "threshold_k", "tolerance"]);
        report.push(vec![Cell::text(&spec.name), Cell::Num(k), Cell::Num(THRESHOLD_TOL)]);
        return Ok(report);
    }
    let k = a.k.expect("clap requires --k without --threshold");
    let model = ProbModel::new(k).map_err(usage)?;
    let m = maximize_with(&spec, &model, &opts);
    let verdict = if m.value > spec.classical_bound {
        "violation possible"
    } else {
        "no violation possible"
    };
    let mut report = Report::new(&[
        "inequality",
        "k",
        "maximum",
        "classical_bound",
        "verdict",
        "settings_a",
        "settings_b",
    ]);
    report.push(vec![
        Cell::text(&spec.name),
        Cell::Num(k),
        Cell::Num(m.value),
        Cell::Num(spec.classical_bound),
        Cell::text(verdict),
        Cell::Text(angles(&m.settings.a)),
        Cell::Text(angles(&m.settings.b)),
    ]);
    Ok(report)
}

fn context(a: &ContextArgs) -> Result<Report, Failure> {
    for (name, v) in [("alpha", a.alpha), ("alphabar", a.alphabar)] {
        if !(v.abs() <= 1.0) {
            return Err(Failure::Usage(format!("--{name} {v} is outside [-1, 1]")));
        }
    }
    let value = contextuality_value(a.alpha, a.alphabar);
    let verdict = if value > CLASSICAL_CONTEXTUALITY_BOUND {
        "contextual"
    } else {
        "noncontextual"
    };
    let mut report = Report::new(&[
        "alpha",
        "alphabar",
        "value",
        "classical_bound",
        "verdict",
        "square_value",
        "equal_alpha_root",
        "quoted_equal_alpha_threshold",
    ]);
    report.push(vec![
        Cell::Num(a.alpha),
        Cell::Num(a.alphabar),
        Cell::Num(value),
        Cell::Num(CLASSICAL_CONTEXTUALITY_BOUND),
        Cell::text(verdict),
        Cell::Num(mermin_peres_scaled(a.alpha, a.alphabar)),
        Cell::Num(equal_alpha_root()),
        Cell::Num(QUOTED_EQUAL_ALPHA_THRESHOLD),
    ]);
    Ok(report)
}
