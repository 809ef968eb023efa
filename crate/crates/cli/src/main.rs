use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use cantor_tm::fixtures::{example_shift, ExampleTable};
use cantor_tm::format::{
    dump_blockmap, parse_cells, parse_config, parse_experiment, parse_machine, parse_shift,
    write_machine, write_shift, Mode,
};
use cantor_tm::gshift::compile_tm;
use cantor_tm::orbit::{
    build_experiment, verify_with_trace, viscous_budget, write_trace, ExperimentSpec, TraceRow,
    Verdict,
};
use cantor_tm::reeb::{
    estimate_c0, return_map_report, AngularBump, Concatenated, HamiltonianFamily, RadialBump,
    SuspensionProblem, ZeroFamily,
};
use cantor_tm::render::{render_blockmap, RenderOptions};
use cantor_tm::tm::ConfigDisplay;
use cantor_tm::{compile_blockmap, encode_point, BiSequence, GeneralizedShift, TuringMachine};

#[derive(Parser)]
#[command(
    name = "cantor-tm",
    version,
    about = "Compile Turing machines to generalized shifts and Cantor block maps, and check halting by orbit"
)]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for batch commands; output order never depends on it.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Record)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Record,
    Pretty,
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    /// F(0.1) = F(1.1) = −1: matches the drawn blocks and the listed map.
    Consistent,
    /// F(0.1) = F(0.0) = −1, as printed next to the rewrite table.
    Literal,
}

impl From<Example> for ExampleTable {
    fn from(e: Example) -> Self {
        match e {
            Example::Consistent => ExampleTable::Consistent,
            Example::Literal => ExampleTable::Literal,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Direct,
    Reader,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fixture {
    Zero,
    Radial,
    Angular,
    ConcatRadial,
    ConcatAngular,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the halting-extended machine is reversible.
    CheckReversible { machine: PathBuf },
    /// Build the machine that halts only when the output window matches.
    MakeReader {
        machine: PathBuf,
        #[arg(long)]
        k: usize,
        /// 2k+1 symbols for positions −k..k.
        #[arg(long)]
        target: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compile a machine to its generalized shift, or any shift to its block map.
    Compile {
        #[arg(required_unless_present = "example", conflicts_with = "example")]
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        example: Option<Example>,
        /// Emit the piecewise-affine block map instead of the shift.
        #[arg(long)]
        blockmap: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Iterate a shift on a sequence and print every step.
    Simulate {
        #[arg(required_unless_present = "example", conflicts_with = "example")]
        shift: Option<PathBuf>,
        #[arg(long, value_enum)]
        example: Option<Example>,
        /// Sequence over the shift alphabet; a lone `.` marks position 0.
        #[arg(long)]
        input: String,
        #[arg(long)]
        steps: u64,
        /// Iterate the compiled block map on the encoded point instead.
        #[arg(long)]
        blockmap: bool,
    },
    /// Run experiments natively and as orbits and compare.
    Verify {
        #[arg(required = true)]
        experiments: Vec<PathBuf>,
        /// Override the experiment budget.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Exact orbit trace as CSV (single experiment only).
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Block map with the orbit drawn on it (single experiment only).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Exact coordinates of a configuration's point in the square Cantor set.
    EncodePoint {
        machine: PathBuf,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long)]
        state: Option<String>,
    },
    /// Flow-time budget of a viscously decaying flow.
    Budget {
        #[arg(long)]
        m: f64,
        #[arg(long)]
        nu: f64,
        /// Times at which to print τ(t).
        #[arg(long)]
        t: Vec<f64>,
    },
    /// Integrate the suspension of a Hamiltonian family and check the contact form.
    Suspension {
        #[arg(long, value_enum, default_value_t = Fixture::Radial)]
        fixture: Fixture,
        #[arg(long, default_value_t = 0.5)]
        amplitude: f64,
        #[arg(long, default_value_t = 0.1)]
        margin: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        /// Contact constant; defaults to 2·C₀ + 1.
        #[arg(long)]
        c: Option<f64>,
    },
    /// Draw domain and image blocks of a block map as SVG.
    Render {
        #[arg(required_unless_present = "example", conflicts_with = "example")]
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        example: Option<Example>,
        /// Comma-separated piece labels.
        #[arg(long)]
        labels: Option<String>,
        /// Also draw blocks on which the map is the identity.
        #[arg(long)]
        identity: bool,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

/// A domain error: reported as one `error kind=… message=…` line.
struct Failure {
    kind: &'static str,
    message: String,
}

impl Failure {
    fn new(kind: &'static str, message: impl ToString) -> Self {
        Failure {
            kind,
            message: message.to_string(),
        }
    }
}

type Result<T> = std::result::Result<T, Failure>;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Failure::new("io", format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::new("io", format!("{}: {e}", p.display()))),
        None => {
            io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Failure::new("io", e))
        }
    }
}

fn load_machine(path: &Path) -> Result<TuringMachine> {
    parse_machine(&read(path)?).map_err(|e| Failure::new("parse", format!("{}: {e}", path.display())))
}

fn is_shift_text(text: &str) -> bool {
    text.lines()
        .any(|l| l.trim_start().starts_with("windowF") || l.trim_start().starts_with("windowG"))
}

/// A machine file compiles through its halting extension; a shift file is
/// taken as is.
enum Source {
    Machine(TuringMachine),
    Shift(GeneralizedShift),
}

fn load_source(path: Option<&Path>, example: Option<Example>) -> Result<Source> {
    if let Some(e) = example {
        return Ok(Source::Shift(example_shift(e.into())));
    }
    let path = path.expect("clap requires a path without --example");
    let text = read(path)?;
    let parsed = if is_shift_text(&text) {
        parse_shift(&text).map(Source::Shift)
    } else {
        parse_machine(&text).map(Source::Machine)
    };
    parsed.map_err(|e| Failure::new("parse", format!("{}: {e}", path.display())))
}

fn shift_of(source: Source) -> Result<GeneralizedShift> {
    match source {
        Source::Shift(s) => Ok(s),
        Source::Machine(m) => compile_tm(&m.extend_halting())
            .map(|(s, _)| s)
            .map_err(|e| Failure::new("compile", e)),
    }
}

fn machine_hash(m: &TuringMachine) -> String {
    let digest = Sha256::digest(write_machine(m).as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

fn symbols(m: &TuringMachine, text: &str) -> Result<Vec<u16>> {
    text.split_whitespace()
        .map(|name| {
            m.symbol_index(name)
                .ok_or_else(|| Failure::new("parse", format!("unknown symbol {name:?}")))
        })
        .collect()
}

fn check_reversible(path: &Path) -> Result<String> {
    let m = load_machine(path)?;
    let ext = m.extend_halting();
    let report = ext.check_reversible().map_err(|e| Failure::new("machine", e))?;
    let mut out = format!("reversible={} machine={}", report.reversible, machine_hash(&m));
    if let Some(w) = report.witness {
        let rule = |(q, s): (u16, u16)| format!("{} {}", ext.state_name(q), ext.symbol_name(s));
        let config = |c| ConfigDisplay { machine: &ext, config: c }.to_string();
        write!(
            out,
            " rules={} witness={}",
            quote(&format!("{}; {}", rule(w.rules[0]), rule(w.rules[1]))),
            quote(&format!("{} | {}", config(&w.configs[0]), config(&w.configs[1]))),
        )
        .unwrap();
    }
    Ok(out + "\n")
}

fn load_spec(path: &Path, budget: Option<u64>, mode: Option<ModeArg>) -> Result<ExperimentSpec> {
    let text = read(path)?;
    let exp = parse_experiment(&text)
        .map_err(|e| Failure::new("parse", format!("{}: {e}", path.display())))?;
    let machine_path = path.parent().unwrap_or(Path::new(".")).join(&exp.machine);
    let machine = load_machine(&machine_path)?;
    let input = parse_config(&machine, &exp.input, exp.state.as_deref())
        .map_err(|e| Failure::new("parse", format!("{}: input: {e}", path.display())))?;
    let target = symbols(&machine, &exp.target)?;
    let budget = budget.unwrap_or(exp.budget);
    if budget == 0 {
        return Err(Failure::new("parse", "budget must be at least 1"));
    }
    Ok(ExperimentSpec {
        machine,
        input,
        k: exp.k,
        target,
        mode: match mode {
            Some(ModeArg::Direct) => Mode::Direct,
            Some(ModeArg::Reader) => Mode::Reader,
            None => exp.mode,
        },
        budget,
    })
}

fn opt(v: Option<u64>) -> String {
    v.map_or("NONE".into(), |v| v.to_string())
}

fn window(m: &TuringMachine, w: &Option<Vec<u16>>) -> String {
    match w {
        Some(w) => quote(
            &w.iter()
                .map(|&s| m.symbol_name(s))
                .collect::<Vec<_>>()
                .join(" "),
        ),
        None => "NONE".into(),
    }
}

fn verdict_text(spec: &ExperimentSpec, v: &Verdict, format: Format) -> String {
    let hash = machine_hash(&spec.machine);
    match format {
        Format::Record => format!(
            "machine={hash} mode={} hit={} native_steps={} consistent={}\n",
            v.mode.name(),
            opt(v.orbit_hit),
            opt(v.native_steps),
            v.consistent
        ),
        Format::Pretty => {
            let m = &spec.machine;
            let mut out = String::new();
            writeln!(out, "machine        {hash}").unwrap();
            writeln!(out, "mode           {}", v.mode.name()).unwrap();
            writeln!(out, "budget         {}", spec.budget).unwrap();
            writeln!(out, "target         {}", window(m, &Some(spec.target.clone()))).unwrap();
            writeln!(out, "native steps   {}", opt(v.native_steps)).unwrap();
            writeln!(out, "native window  {}", window(m, &v.native_window)).unwrap();
            writeln!(out, "native accepts {}", v.native_accepts).unwrap();
            writeln!(out, "orbit hit      {}", opt(v.orbit_hit)).unwrap();
            writeln!(out, "expected hit   {}", opt(v.expected_hit)).unwrap();
            writeln!(out, "orbit window   {}", window(m, &v.orbit_window)).unwrap();
            writeln!(out, "orbit accepts  {}", v.orbit_accepts).unwrap();
            writeln!(out, "consistent     {}", v.consistent).unwrap();
            out
        }
    }
}

/// Runs `f` over `items` on up to `jobs` threads, keeping input order.
fn parallel_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let jobs = jobs.clamp(1, items.len().max(1));
    if jobs == 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| scope.spawn(|| c.iter().map(&f).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

#[allow(clippy::too_many_arguments)]
fn verify(
    paths: &[PathBuf],
    budget: Option<u64>,
    mode: Option<ModeArg>,
    trace: Option<&Path>,
    svg: Option<&Path>,
    jobs: usize,
    format: Format,
) -> Result<String> {
    if paths.len() > 1 && (trace.is_some() || svg.is_some()) {
        return Err(Failure::new("usage", "--trace and --svg take a single experiment"));
    }
    let specs = paths
        .iter()
        .map(|p| load_spec(p, budget, mode))
        .collect::<Result<Vec<_>>>()?;
    let want_rows = trace.is_some() || svg.is_some();
    let results = parallel_map(&specs, jobs, |spec| {
        let mut rows = Vec::new();
        let v = verify_with_trace(spec, want_rows.then_some(&mut rows));
        v.map(|v| (v, rows))
    });
    let mut out = String::new();
    for (spec, result) in specs.iter().zip(results) {
        let (v, rows) = result.map_err(|e| Failure::new("verify", e))?;
        for w in &v.warnings {
            eprintln!("warning: {w}");
        }
        out.push_str(&verdict_text(spec, &v, format));
        if trace.is_some() || svg.is_some() {
            let exp = build_experiment(spec).map_err(|e| Failure::new("verify", e))?;
            if let Some(path) = trace {
                write_trace_file(path, exp.map.radix(), &rows)?;
            }
            if let Some(path) = svg {
                let points: Vec<_> = rows.iter().map(|r| r.point.clone()).collect();
                let text = render_blockmap(
                    &exp.map,
                    exp.shift.alphabet(),
                    &RenderOptions {
                        title: Some(format!("orbit of {}", machine_hash(&spec.machine))),
                        orbit: Some(&points),
                        ..Default::default()
                    },
                );
                write_out(Some(path), &text)?;
            }
        }
    }
    Ok(out)
}

fn write_trace_file(path: &Path, radix: u32, rows: &[TraceRow]) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Failure::new("io", format!("{}: {e}", path.display())))?;
    let mut w = io::BufWriter::new(file);
    write_trace(&mut w, radix, rows)
        .and_then(|_| w.flush())
        .map_err(|e| Failure::new("io", e))
}

fn simulate(source: Source, input: &str, steps: u64, blockmap: bool) -> Result<String> {
    let shift = shift_of(source)?;
    let tape = parse_cells(input, |n| shift.symbol_index(n)).map_err(|e| Failure::new("parse", e))?;
    let mut seq = BiSequence(tape);
    let n = shift.num_symbols();
    let alphabet = shift.alphabet();
    let mut out = String::new();
    writeln!(out, "0\t{}", seq.display(alphabet)).unwrap();
    if blockmap {
        let map = compile_blockmap(&shift);
        let mut p = encode_point(&seq, n);
        for i in 1..=steps {
            map.apply_in_place(&mut p);
            let s = cantor_tm::decode_point(&p, n).map_err(|e| Failure::new("cantor", e))?;
            writeln!(out, "{i}\t{}", s.display(alphabet)).unwrap();
        }
    } else {
        for i in 1..=steps {
            seq = shift.apply(&seq);
            writeln!(out, "{i}\t{}", seq.display(alphabet)).unwrap();
        }
    }
    Ok(out)
}

fn encode(path: &Path, input: &str, state: Option<&str>, format: Format) -> Result<String> {
    let m = load_machine(path)?;
    let config = parse_config(&m, input, state).map_err(|e| Failure::new("parse", e))?;
    let (shift, conj) = compile_tm(&m.extend_halting()).map_err(|e| Failure::new("compile", e))?;
    let p = encode_point(&conj.encode(&config), shift.num_symbols());
    Ok(match format {
        Format::Record => format!(
            "radix={} x={} y={} x_approx={:e} y_approx={:e}\n",
            p.radix(),
            p.x,
            p.y,
            p.x.to_f64(),
            p.y.to_f64()
        ),
        Format::Pretty => format!(
            "sequence {}\nradix    {}\nx        {} ≈ {}\ny        {} ≈ {}\n",
            conj.encode(&config).display(shift.alphabet()),
            p.radix(),
            p.x,
            p.x.to_f64(),
            p.y,
            p.y.to_f64()
        ),
    })
}

fn budget(m: f64, nu: f64, ts: &[f64]) -> Result<String> {
    let b = viscous_budget(m, nu).map_err(|e| Failure::new("budget", e))?;
    let mut out = format!(
        "budget m={:e} nu={:e} tau_limit={:e} complete_steps={}",
        b.m, b.nu, b.tau_limit, b.complete_steps
    );
    for &t in ts {
        write!(out, " tau({t:e})={:e}", b.tau(t)).unwrap();
    }
    Ok(out + "\n")
}

#[allow(clippy::too_many_arguments)]
fn suspension(
    fixture: Fixture,
    amplitude: f64,
    margin: f64,
    delta: f64,
    tolerance: f64,
    samples: usize,
    grid: usize,
    c: Option<f64>,
    seed: u64,
    format: Format,
) -> Result<String> {
    if !(tolerance > 0.0) {
        return Err(Failure::new("suspension", "tolerance must be positive"));
    }
    if !(0.0..0.5).contains(&delta) || !(0.0..1.0).contains(&margin) {
        return Err(Failure::new("suspension", "need 0 ≤ delta < 1/2 and 0 ≤ margin < 1"));
    }
    let radial = RadialBump { amplitude, margin, delta };
    let angular = AngularBump { amplitude, margin, delta };
    let family: Box<dyn HamiltonianFamily> = match fixture {
        Fixture::Zero => Box::new(ZeroFamily),
        Fixture::Radial => Box::new(radial),
        Fixture::Angular => Box::new(angular),
        Fixture::ConcatRadial => Box::new(Concatenated { inner: radial }),
        Fixture::ConcatAngular => Box::new(Concatenated { inner: angular }),
    };
    let mut problem = SuspensionProblem::new(family.as_ref(), grid)
        .map_err(|e| Failure::new("suspension", e))?
        .with_tolerance(tolerance);
    if let Some(c) = c {
        let c0 = estimate_c0(family.as_ref(), grid).map_err(|e| Failure::new("suspension", e))?;
        if c <= c0 {
            eprintln!("warning: C = {c:e} does not exceed the estimated C0 = {c0:e}");
        }
        problem.c = c;
    }
    let report = return_map_report(&problem, samples, seed).map_err(|e| Failure::new("suspension", e))?;
    Ok(match format {
        Format::Record => report.record() + "\n",
        Format::Pretty => report.pretty(),
    })
}

/// Figure letters of the two-symbol example, keyed by window word.
fn example_labels(shift: &GeneralizedShift) -> Vec<String> {
    compile_blockmap(shift)
        .pieces()
        .iter()
        .map(|p| {
            match p.word[..] {
                [0, 1] => "A",
                [1, 1] => "B",
                [0, 0] => "C",
                [1, 0] => "D",
                _ => "?",
            }
            .to_string()
        })
        .collect()
}

fn render(source: Source, is_example: bool, labels: Option<&str>, identity: bool) -> Result<String> {
    let shift = shift_of(source)?;
    let map = compile_blockmap(&shift);
    let labels = match labels {
        Some(l) => Some(l.split(',').map(|s| s.trim().to_string()).collect()),
        None if is_example => Some(example_labels(&shift)),
        None => None,
    };
    Ok(render_blockmap(
        &map,
        shift.alphabet(),
        &RenderOptions {
            title: None,
            labels,
            orbit: None,
            show_identity: identity,
        },
    ))
}

fn run(cli: Cli) -> Result<()> {
    let format = cli.format;
    match cli.command {
        Command::CheckReversible { machine } => write_out(None, &check_reversible(&machine)?),
        Command::MakeReader { machine, k, target, output } => {
            let m = load_machine(&machine)?;
            let target = symbols(&m, &target)?;
            let reader = m.make_reader(k, &target).map_err(|e| Failure::new("machine", e))?;
            write_out(output.as_deref(), &write_machine(&reader))
        }
        Command::Compile { input, example, blockmap, output } => {
            let source = load_source(input.as_deref(), example)?;
            let shift = shift_of(source)?;
            let text = if blockmap {
                dump_blockmap(&compile_blockmap(&shift), shift.alphabet())
            } else {
                write_shift(&shift)
            };
            write_out(output.as_deref(), &text)
        }
        Command::Simulate { shift, example, input, steps, blockmap } => {
            let source = load_source(shift.as_deref(), example)?;
            write_out(None, &simulate(source, &input, steps, blockmap)?)
        }
        Command::Verify { experiments, budget, mode, trace, svg } => {
            let text = verify(
                &experiments,
                budget,
                mode,
                trace.as_deref(),
                svg.as_deref(),
                cli.jobs,
                format,
            )?;
            write_out(None, &text)
        }
        Command::EncodePoint { machine, input, state } => {
            write_out(None, &encode(&machine, &input, state.as_deref(), format)?)
        }
        Command::Budget { m, nu, t } => write_out(None, &budget(m, nu, &t)?),
        Command::Suspension {
            fixture,
            amplitude,
            margin,
            delta,
            tolerance,
            samples,
            grid,
            c,
        } => write_out(
            None,
            &suspension(
                fixture, amplitude, margin, delta, tolerance, samples, grid, c, cli.seed, format,
            )?,
        ),
        Command::Render { input, example, labels, identity, svg } => {
            let source = load_source(input.as_deref(), example)?;
            let text = render(source, example.is_some(), labels.as_deref(), identity)?;
            write_out(svg.as_deref(), &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error kind={} message={}", f.kind, quote(&f.message));
            if f.kind == "usage" {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
