//! Halting experiments: run a machine natively and as an orbit of its block
//! map, and compare the two.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use num_bigint::BigInt;
use thiserror::Error;

use crate::cantor::{
    compile_blockmap, decode_point, encode_point, halt_region, in_region, CantorBlock,
    CantorPoint, Location, PiecewiseBlockMap,
};
use crate::format::Mode;
use crate::gshift::{compile_tm, Conjugation, GeneralizedShift, ShiftError};
use crate::radix::RadixRational;
use crate::tape::SymbolIndex;
use crate::tm::{Configuration, RunResult, TmError, TuringMachine};

#[derive(Debug, Error)]
pub enum OrbitError {
    #[error(transparent)]
    Machine(#[from] TmError),
    #[error(transparent)]
    Shift(#[from] ShiftError),
    #[error("orbit point left the Cantor set: {0}")]
    NotCantor(String),
    #[error("trace: {0}")]
    Trace(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub machine: TuringMachine,
    /// Input configuration; its state is normally the initial state.
    pub input: Configuration,
    pub k: usize,
    /// Expected symbols at positions `−k..=k`.
    pub target: Vec<SymbolIndex>,
    pub mode: Mode,
    /// Native step budget. In reader mode the orbit gets `3k + 1` extra
    /// iterations to read the output.
    pub budget: u64,
}

impl ExperimentSpec {
    pub fn orbit_budget(&self) -> u64 {
        match self.mode {
            Mode::Direct => self.budget,
            Mode::Reader => self.budget + reader_latency(self.k),
        }
    }
}

/// Extra iterations the reader machine spends between the original machine
/// reaching its halting state and the reader halting.
pub fn reader_latency(k: usize) -> u64 {
    3 * k as u64 + 1
}

/// Everything needed to iterate an experiment's orbit.
#[derive(Debug, Clone)]
pub struct Experiment {
    /// The machine whose dynamics the map realizes (extended; the reader
    /// machine in reader mode).
    pub machine: TuringMachine,
    pub shift: GeneralizedShift,
    pub conjugation: Conjugation,
    pub map: PiecewiseBlockMap,
    pub start: CantorPoint,
    pub halt_blocks: Vec<CantorBlock>,
    /// Verdict of the rule-level reversibility check on `machine`.
    pub reversible: bool,
    pub warnings: Vec<String>,
}

pub fn build_experiment(spec: &ExperimentSpec) -> Result<Experiment, OrbitError> {
    if spec.target.len() != 2 * spec.k + 1 {
        return Err(TmError::TargetLength {
            expected: 2 * spec.k + 1,
            got: spec.target.len(),
        }
        .into());
    }
    let machine = match spec.mode {
        Mode::Direct => spec.machine.extend_halting(),
        Mode::Reader => spec.machine.make_reader(spec.k, &spec.target)?.extend_halting(),
    };
    let reversible = machine.check_reversible()?.reversible;
    let mut warnings = Vec::new();
    if !reversible {
        warnings.push(match spec.mode {
            Mode::Reader => "reader machine is not reversible; its block map is not injective",
            Mode::Direct => "extended machine is not reversible; its block map is not injective",
        }
        .to_string());
    }
    let (shift, conjugation) = compile_tm(&machine)?;
    let map = compile_blockmap(&shift);
    let start = encode_point(&conjugation.encode(&spec.input), shift.num_symbols());
    let halt_blocks = halt_region(&conjugation);
    Ok(Experiment {
        machine,
        shift,
        conjugation,
        map,
        start,
        halt_blocks,
        reversible,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRow {
    pub iter: u64,
    pub point: CantorPoint,
    /// Block of the map holding the point: pieces first, then identity
    /// domains. `None` outside every domain block.
    pub block: Option<usize>,
    pub in_halt_region: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitOutcome {
    /// First iteration at which the orbit lies in the halt region.
    pub hit: Option<u64>,
    /// Point at the hit, or after the last iteration of the budget.
    pub point: CantorPoint,
    pub halt_block: Option<usize>,
}

fn block_index(map: &PiecewiseBlockMap, loc: Location) -> Option<usize> {
    match loc {
        Location::Piece(i) => Some(i),
        Location::Identity(i) => Some(map.pieces().len() + i),
        Location::Outside => None,
    }
}

fn halt_hit(blocks: &[CantorBlock], p: &CantorPoint) -> Option<usize> {
    // every halt block shares its first y digit
    match blocks.first() {
        Some(b) if p.y_digit(1) == b.y_prefix[0] => in_region(blocks, p),
        _ => None,
    }
}

/// Iterates `map` from `start` for at most `budget` steps and stops at the
/// first point inside `halt_blocks`. Iteration 0 is the start point.
pub fn run_orbit(
    map: &PiecewiseBlockMap,
    start: &CantorPoint,
    halt_blocks: &[CantorBlock],
    budget: u64,
    mut trace: Option<&mut Vec<TraceRow>>,
) -> OrbitOutcome {
    let mut p = start.clone();
    let mut iter = 0;
    loop {
        let halt = halt_hit(halt_blocks, &p);
        if let Some(rows) = trace.as_deref_mut() {
            rows.push(TraceRow {
                iter,
                point: p.clone(),
                block: block_index(map, map.locate(&p)),
                in_halt_region: halt.is_some(),
            });
        }
        if halt.is_some() {
            return OrbitOutcome {
                hit: Some(iter),
                point: p,
                halt_block: halt,
            };
        }
        if iter == budget {
            return OrbitOutcome {
                hit: None,
                point: p,
                halt_block: None,
            };
        }
        map.apply_in_place(&mut p);
        iter += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub mode: Mode,
    pub orbit_hit: Option<u64>,
    /// Output window read off the orbit point at the hit (direct mode).
    pub orbit_window: Option<Vec<SymbolIndex>>,
    pub orbit_accepts: bool,
    pub native_steps: Option<u64>,
    pub native_window: Option<Vec<SymbolIndex>>,
    pub native_accepts: bool,
    /// Iteration at which the orbit should hit the halt region, if at all.
    pub expected_hit: Option<u64>,
    pub consistent: bool,
    pub warnings: Vec<String>,
}

/// Runs the experiment both ways and checks that they agree: the orbit
/// hits the halt region exactly when (and at the iteration when) the
/// native run says it should.
pub fn verify_equivalence(spec: &ExperimentSpec) -> Result<Verdict, OrbitError> {
    verify_with_trace(spec, None)
}

pub fn verify_with_trace(
    spec: &ExperimentSpec,
    trace: Option<&mut Vec<TraceRow>>,
) -> Result<Verdict, OrbitError> {
    let exp = build_experiment(spec)?;
    let native = spec.machine.run(&spec.input, spec.budget)?;
    let (native_steps, native_window) = match &native {
        RunResult::Halted { steps, config } => (Some(*steps), Some(config.output_window(spec.k))),
        RunResult::Running { .. } => (None, None),
    };
    let native_accepts = native_window.as_deref() == Some(&spec.target[..]);
    let expected_hit = match spec.mode {
        Mode::Direct => native_steps,
        Mode::Reader => native_steps
            .filter(|_| native_accepts)
            .map(|n| n + reader_latency(spec.k)),
    };

    let outcome = run_orbit(&exp.map, &exp.start, &exp.halt_blocks, spec.orbit_budget(), trace);
    let orbit_window = match (spec.mode, outcome.hit) {
        (Mode::Direct, Some(_)) => Some(read_config(&exp, &outcome.point)?.output_window(spec.k)),
        _ => None,
    };
    let orbit_accepts = match spec.mode {
        Mode::Direct => orbit_window.as_deref() == Some(&spec.target[..]),
        Mode::Reader => outcome.hit.is_some(),
    };
    let consistent = outcome.hit == expected_hit
        && orbit_accepts == native_accepts
        && (spec.mode == Mode::Reader || orbit_window == native_window);
    Ok(Verdict {
        mode: spec.mode,
        orbit_hit: outcome.hit,
        orbit_window,
        orbit_accepts,
        native_steps,
        native_window,
        native_accepts,
        expected_hit,
        consistent,
        warnings: exp.warnings,
    })
}

/// Decodes an orbit point back to a machine configuration.
pub fn read_config(exp: &Experiment, p: &CantorPoint) -> Result<Configuration, OrbitError> {
    let seq = decode_point(p, exp.shift.num_symbols())
        .map_err(|e| OrbitError::NotCantor(e.to_string()))?;
    Ok(exp.conjugation.decode(&seq)?)
}

pub const TRACE_HEADER: &str = "iter,x_num,x_exp,y_num,y_exp,block_id,in_halt_region";

/// Writes a trace as CSV. Coordinates are exact: `x = x_num / radix^x_exp`.
/// `block_id` is −1 outside every domain block.
pub fn write_trace<W: Write>(mut out: W, radix: u32, rows: &[TraceRow]) -> io::Result<()> {
    writeln!(out, "# radix: {radix}")?;
    writeln!(out, "{TRACE_HEADER}")?;
    let mut line = String::new();
    for r in rows {
        line.clear();
        write!(
            line,
            "{},{},{},{},{},{},{}",
            r.iter,
            r.point.x.numerator(),
            r.point.x.exponent(),
            r.point.y.numerator(),
            r.point.y.exponent(),
            r.block.map_or(-1, |b| b as i64),
            u8::from(r.in_halt_region),
        )
        .unwrap();
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn read_trace<R: BufRead>(input: R) -> Result<(u32, Vec<TraceRow>), OrbitError> {
    let bad = |msg: String| OrbitError::Trace(msg);
    let mut lines = input.lines();
    let meta = lines.next().ok_or_else(|| bad("empty trace".into()))??;
    let radix: u32 = meta
        .strip_prefix("# radix:")
        .and_then(|r| r.trim().parse().ok())
        .ok_or_else(|| bad(format!("bad metadata line {meta:?}")))?;
    let header = lines.next().ok_or_else(|| bad("missing header".into()))??;
    if header.trim() != TRACE_HEADER {
        return Err(bad(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.trim().split(',').collect();
        if f.len() != 7 {
            return Err(bad(format!("row {}: expected 7 fields", i + 1)));
        }
        let int = |s: &str| -> Result<BigInt, OrbitError> {
            s.parse().map_err(|_| bad(format!("row {}: bad integer {s:?}", i + 1)))
        };
        let exp = |s: &str| -> Result<u32, OrbitError> {
            s.parse().map_err(|_| bad(format!("row {}: bad exponent {s:?}", i + 1)))
        };
        let block: i64 = f[5]
            .parse()
            .map_err(|_| bad(format!("row {}: bad block id", i + 1)))?;
        rows.push(TraceRow {
            iter: f[0].parse().map_err(|_| bad(format!("row {}: bad iter", i + 1)))?,
            point: CantorPoint {
                x: RadixRational::new(radix, &int(f[1])?, exp(f[2])?),
                y: RadixRational::new(radix, &int(f[3])?, exp(f[4])?),
            },
            block: usize::try_from(block).ok(),
            in_halt_region: f[6] == "1",
        });
    }
    Ok((radix, rows))
}

#[derive(Debug, Error, PartialEq)]
#[error("{name} must be positive and finite, got {value}")]
pub struct NonPositiveParameter {
    pub name: &'static str,
    pub value: f64,
}

/// Time budget of a flow whose speed decays like `M e^{−νt}`: the elapsed
/// flow time `τ(t) = (M/ν)(1 − e^{−νt})` never reaches `M/ν`, so only the
/// steps `n < M/ν` of a unit-time-per-step simulation ever complete.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViscousBudget {
    pub m: f64,
    pub nu: f64,
    pub tau_limit: f64,
    pub complete_steps: u64,
}

impl ViscousBudget {
    pub fn tau(&self, t: f64) -> f64 {
        -self.tau_limit * (-self.nu * t).exp_m1()
    }
}

pub fn viscous_budget(m: f64, nu: f64) -> Result<ViscousBudget, NonPositiveParameter> {
    for (name, value) in [("M", m), ("nu", nu)] {
        if !(value > 0.0 && value.is_finite()) {
            return Err(NonPositiveParameter { name, value });
        }
    }
    let tau_limit = m / nu;
    // largest integer strictly below the limit
    let complete_steps = if tau_limit >= u64::MAX as f64 {
        u64::MAX
    } else {
        (tau_limit.ceil() as u64).saturating_sub(1)
    };
    Ok(ViscousBudget {
        m,
        nu,
        tau_limit,
        complete_steps,
    })
}
