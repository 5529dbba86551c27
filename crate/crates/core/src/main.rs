use std::fmt::Write as _;
use std::io::{self, Write as _};
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use thetafront::bracket::{CAP_ENV, DEFAULT_CROSSING_CAP};
use thetafront::diagram::{parse, serialize, FrontDiagram, Mode};
use thetafront::invariants::{classify_r, invariant_vector_of, knot_invariants};
use thetafront::link::LinkError;
use thetafront::pretzel::{verify_pretzel, Status};
use thetafront::realization::{realize_theta, theta_realizable};
use thetafront::render::{render_front, render_link, Format};
use thetafront::ribbon::{components_of, expected_self_linking, push_off_of, vertex_type_of};
use thetafront::walks::fuzz;

#[derive(Parser)]
#[command(name = "thetafront", version, about = "Legendrian theta-graph fronts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a front diagram.
    Validate(FileArgs),
    /// tb and rot of every cycle, R, and the table row at `b`.
    Invariants(FileArgs),
    /// Build a theta front with the given invariants.
    Realize(RealizeArgs),
    /// Transverse push-off: components, self-linking, linking matrix.
    Pushoff(FileArgs),
    /// Compare the push-off with the pretzel link predicted from tb.
    PretzelCheck(PretzelArgs),
    /// Random move walks, checking every invariant along the way.
    Fuzz(FuzzArgs),
    /// Draw a front or its push-off as SVG or ASCII.
    Render(RenderArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Report {
    Text,
    Json,
}

#[derive(Args)]
struct FileArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    report: Report,
}

#[derive(Args)]
struct RealizeArgs {
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
    tb: Vec<i32>,
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
    rot: Vec<i32>,
    /// Write the diagram here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    report: Report,
}

#[derive(Args)]
struct PretzelArgs {
    #[command(flatten)]
    input: FileArgs,
    /// Largest crossing count the state sum will attempt.
    #[arg(long, env = CAP_ENV, default_value_t = DEFAULT_CROSSING_CAP)]
    cap: usize,
}

#[derive(Args)]
struct FuzzArgs {
    #[command(flatten)]
    input: FileArgs,
    #[arg(long, default_value_t = 100)]
    walks: usize,
    #[arg(long, default_value_t = 50)]
    steps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct RenderArgs {
    file: PathBuf,
    #[arg(long, default_value = "svg")]
    format: Format,
    /// Draw the transverse push-off instead of the front.
    #[arg(long)]
    pushoff: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Why a command stopped early, mapped onto the exit-code table.
enum Failure {
    /// A check ran and failed.
    Check(String),
    /// Bad arguments, unreadable input, or unrealizable invariants.
    Usage(String),
}

type Outcome = Result<bool, Failure>;

fn read(path: &Path) -> Result<FrontDiagram, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
        }
        None => {
            put(text);
            Ok(())
        }
    }
}

/// Writes to stdout. A reader that hung up early (`| head`) is not an error;
/// the exit status still reflects the command's own result.
fn put(text: &str) {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => panic!("writing stdout: {e}"),
        _ => {}
    }
}

fn emit(report: Report, value: &impl Serialize, text: impl FnOnce() -> String) {
    match report {
        Report::Json => {
            put(&(serde_json::to_string_pretty(value).expect("reports serialize") + "\n"))
        }
        Report::Text => put(&text()),
    }
}

fn triple(v: [i32; 3]) -> String {
    format!("({},{},{})", v[0], v[1], v[2])
}

fn validate(args: &FileArgs) -> Outcome {
    let d = read(&args.file)?;
    let (valid, error, cycles) = match d.validate() {
        Ok(g) => (true, None, g.cycles.iter().map(|c| c.name()).collect()),
        Err(e) => (false, Some(e.to_string()), vec![]),
    };
    let value = json!({
        "valid": valid,
        "mode": d.mode.as_str(),
        "events": d.events.len(),
        "cycles": cycles,
        "error": error,
    });
    emit(args.report, &value, || match &error {
        None => format!(
            "valid {} diagram, {} events, cycles {}\n",
            d.mode.as_str(),
            d.events.len(),
            cycles.join(" ")
        ),
        Some(e) => format!("invalid: {e}\n"),
    });
    Ok(valid)
}

fn invariants(args: &FileArgs) -> Outcome {
    let d = read(&args.file)?;
    let g = d.validate().map_err(|e| Failure::Check(e.to_string()))?;
    if d.mode != Mode::Theta {
        let per = knot_invariants(&d).map_err(|e| Failure::Check(e.to_string()))?;
        let value = json!({
            "mode": d.mode.as_str(),
            "cycles": per.iter().map(|(tb, rot)| json!({"tb": tb, "rot": rot})).collect::<Vec<_>>(),
        });
        emit(args.report, &value, || {
            per.iter()
                .enumerate()
                .fold(String::new(), |mut s, (i, (tb, rot))| {
                    let _ = writeln!(s, "cycle {}: tb={tb} rot={rot}", i + 1);
                    s
                })
        });
        return Ok(true);
    }
    let v = invariant_vector_of(&d, &g).map_err(|e| Failure::Check(e.to_string()))?;
    // The row needs standard form at the vertices; report it only then.
    let row = classify_r(&d).ok();
    let value = json!({
        "tb": v.tb,
        "rot": v.rot,
        "R": v.r,
        "row": row.map(|r| r.case),
    });
    emit(args.report, &value, || {
        let mut s = format!("tb={} rot={} R={}", triple(v.tb), triple(v.rot), v.r);
        if let Some(r) = row {
            let _ = write!(s, " row={}", r.case);
        }
        s + "\n"
    });
    Ok(true)
}

fn realize(args: &RealizeArgs) -> Outcome {
    let three = |name: &str, v: &[i32]| -> Result<[i32; 3], Failure> {
        v.try_into()
            .map_err(|_| Failure::Usage(format!("--{name} takes three comma-separated integers")))
    };
    let (tb, rot) = (three("tb", &args.tb)?, three("rot", &args.rot)?);
    let condition = theta_realizable(tb, rot).map_err(|e| Failure::Usage(e.to_string()))?;
    let d = realize_theta(tb, rot).map_err(|e| Failure::Usage(e.to_string()))?;
    let text = serialize(&d);
    match (args.report, &args.out) {
        (Report::Text, None) => write_out(None, &text)?,
        (report, out) => {
            if let Some(p) = out {
                write_out(Some(p), &text)?;
            }
            let value = json!({
                "tb": tb,
                "rot": rot,
                "condition": condition,
                "out": out.as_ref().map(|p| p.display().to_string()),
                "diagram": out.is_none().then_some(&text),
            });
            emit(report, &value, || {
                format!("condition {condition}, {} events written\n", d.events.len())
            });
        }
    }
    Ok(true)
}

fn pushoff(args: &FileArgs) -> Outcome {
    let d = read(&args.file)?;
    let g = d.validate().map_err(|e| Failure::Check(e.to_string()))?;
    let l = push_off_of(&d, &g);
    let a = l.analyze().map_err(|e| Failure::Check(e.to_string()))?;
    let comps = components_of(&l, &a).map_err(|e| Failure::Check(e.to_string()))?;
    // A knot has no linking numbers; the report carries null instead.
    let matrix = match a.linking_matrix() {
        Ok(m) => Some(m),
        Err(LinkError::SingleComponent) => None,
        Err(e) => return Err(Failure::Check(e.to_string())),
    };
    let vertex_type = (d.mode == Mode::Theta)
        .then(|| vertex_type_of(&d, &g))
        .transpose();
    let vertex_type = vertex_type.map_err(|e| Failure::Check(e.to_string()))?;
    let expected: Vec<Option<i32>> = comps
        .iter()
        .map(|c| match a.components {
            1 if d.mode == Mode::Theta => Some(1),
            _ => expected_self_linking(&d, &g, &c.edges),
        })
        .collect();
    let value = json!({
        "crossings": l.crossing_count(),
        "components": comps.iter().zip(&expected).map(|(c, e)| json!({
            "index": c.index,
            "edges": c.edges,
            "self_linking": c.self_linking,
            "expected_self_linking": e,
        })).collect::<Vec<_>>(),
        "linking_matrix": matrix,
        "vertex_type": vertex_type,
    });
    emit(args.report, &value, || {
        let noun = if comps.len() == 1 {
            "component"
        } else {
            "components"
        };
        let mut s = format!("{} {noun}, {} crossings", comps.len(), l.crossing_count());
        if let Some(t) = vertex_type {
            let _ = write!(
                s,
                ", {} vertices",
                serde_json::to_value(t).unwrap().as_str().unwrap()
            );
        }
        s.push('\n');
        for (c, e) in comps.iter().zip(&expected) {
            let _ = write!(s, "  T{}: sl={}", c.index + 1, c.self_linking);
            if let Some(e) = e {
                let _ = write!(s, " (expected {e})");
            }
            s.push('\n');
        }
        if matrix.is_some() {
            s.push_str("linking matrix:\n");
        }
        for row in matrix.iter().flatten() {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
            let _ = writeln!(s, " {}", cells.join(""));
        }
        s
    });
    Ok(true)
}

fn pretzel_check(args: &PretzelArgs) -> Outcome {
    let d = read(&args.input.file)?;
    let report = verify_pretzel(&d, args.cap).map_err(|e| Failure::Check(e.to_string()))?;
    emit(args.input.report, &report, || {
        let mut s = format!(
            "P{} with {} push-off crossings\n",
            triple(report.coefficients.0),
            report.push_off.crossings
        );
        for c in &report.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            let _ = writeln!(s, "{tag} {:<20} {}", c.name, c.detail);
        }
        s
    });
    Ok(report.passed())
}

fn fuzz_cmd(args: &FuzzArgs) -> Outcome {
    let d = read(&args.input.file)?;
    let report =
        fuzz(&d, args.walks, args.steps, args.seed).map_err(|e| Failure::Check(e.to_string()))?;
    emit(args.input.report, &report, || {
        let mut s = format!(
            "{} walks x {} steps, seed {}\n",
            report.walks, report.steps, report.seed
        );
        for t in &report.tallies {
            let tag = if t.failed == 0 { "PASS" } else { "FAIL" };
            let _ = writeln!(
                s,
                "{tag} {:<20} {:>8} ok {:>6} failed",
                t.check, t.passed, t.failed
            );
        }
        let rows: Vec<String> = report
            .rows
            .iter()
            .map(|(r, n)| format!("{r}:{n}"))
            .collect();
        let _ = writeln!(s, "rows seen: {}", rows.join(" "));
        if let Some(f) = report.failures.iter().min_by_key(|f| f.trace.len()) {
            let _ = writeln!(
                s,
                "shortest failing trace: walk {} (seed {}), {} at step {}: {}",
                f.walk, f.seed, f.check, f.step, f.detail
            );
            for m in &f.trace {
                let _ = writeln!(
                    s,
                    "  {:?} at {} flip_v={} flip_h={} inverse={} param={}",
                    m.kind, m.index, m.flip_v, m.flip_h, m.inverse, m.param
                );
            }
        }
        s
    });
    Ok(report.passed())
}

fn render(args: &RenderArgs) -> Outcome {
    let d = read(&args.file)?;
    let text = if args.pushoff {
        let g = d.validate().map_err(|e| Failure::Check(e.to_string()))?;
        render_link(&push_off_of(&d, &g), args.format).map_err(|e| Failure::Check(e.to_string()))?
    } else {
        render_front(&d, args.format).map_err(|e| Failure::Check(e.to_string()))?
    };
    write_out(args.out.as_deref(), &text)?;
    Ok(true)
}

fn dispatch(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Validate(a) => validate(a),
        Command::Invariants(a) => invariants(a),
        Command::Realize(a) => realize(a),
        Command::Pushoff(a) => pushoff(a),
        Command::PretzelCheck(a) => pretzel_check(a),
        Command::Fuzz(a) => fuzz_cmd(a),
        Command::Render(a) => render(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    match panic::catch_unwind(AssertUnwindSafe(|| dispatch(&cli))) {
        Ok(Ok(true)) => ExitCode::SUCCESS,
        Ok(Ok(false)) => ExitCode::from(1),
        Ok(Err(Failure::Check(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Ok(Err(Failure::Usage(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(_) => {
            eprintln!("internal error: an assertion failed");
            ExitCode::from(3)
        }
    }
}
