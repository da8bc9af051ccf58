//! Parameter sweeps, improvement maps, CSV emission, and the CLI.
//!
//! Sweeps walk the scaled Hawking temperature for a list of pre-measurement
//! strengths under a post-measurement policy; improvement grids scan the
//! full (p, q) square at a fixed temperature and report how much the weak
//! measurements gain over the bare channel. All output is deterministic
//! CSV: repeated runs with identical inputs are byte-identical.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::horizon::HawkingMode;
use crate::protocol::{self, InputState, ProtocolConfig, QPolicy};

/// Which bare-channel average fidelity an improvement map subtracts.
///
/// The two conventions differ: `Paper` uses F₀ = (ζ+1)²/4, while
/// `Consistent` uses the sweep formula at p = q = 0, which evaluates to
/// (ζ²+ζ+2)/4. They coincide only at ζ = 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Baseline {
    Paper,
    Consistent,
}

/// A sweep/grid request.
#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub t_steps: usize,
    pub p_values: Vec<f64>,
    pub q_policy: QPolicy,
    /// Side length of the (p, q) improvement grid.
    pub grid_resolution: usize,
    pub baseline: Baseline,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            t_min: 0.01,
            t_max: 20.0,
            t_steps: 200,
            p_values: vec![0.0],
            q_policy: QPolicy::Manual(0.0),
            grid_resolution: 201,
            baseline: Baseline::Paper,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.t_min.is_finite() || self.t_min < 0.0 {
            return Err(Error::InvalidSpec(format!("t_min {} must be ≥ 0", self.t_min)));
        }
        if !self.t_max.is_finite() || self.t_max <= self.t_min {
            return Err(Error::InvalidSpec(format!(
                "t_max {} must exceed t_min {}",
                self.t_max, self.t_min
            )));
        }
        if self.t_steps < 2 {
            return Err(Error::InvalidSpec(format!("t_steps {} must be ≥ 2", self.t_steps)));
        }
        if self.p_values.is_empty() {
            return Err(Error::InvalidSpec("no p values given".into()));
        }
        for &p in &self.p_values {
            if !p.is_finite() || !(0.0..1.0).contains(&p) {
                return Err(Error::InvalidSpec(format!("p value {p} must lie in [0, 1)")));
            }
        }
        if self.grid_resolution < 2 {
            return Err(Error::InvalidSpec(format!(
                "grid resolution {} must be ≥ 2",
                self.grid_resolution
            )));
        }
        Ok(())
    }

    fn t_grid(&self) -> Vec<f64> {
        let step = (self.t_max - self.t_min) / (self.t_steps - 1) as f64;
        (0..self.t_steps).map(|i| self.t_min + i as f64 * step).collect()
    }
}

/// One fidelity-sweep row.
#[derive(Clone, Copy, Debug)]
pub struct SweepRow {
    pub t: f64,
    pub p: f64,
    pub q: f64,
    pub f_av: f64,
    pub success: f64,
    pub concurrence: f64,
}

/// One concurrence-sweep row: both optimal policies at the same point.
#[derive(Clone, Copy, Debug)]
pub struct ConcurrenceRow {
    pub t: f64,
    pub p: f64,
    pub c_type1: f64,
    pub c_type2: f64,
}

/// One improvement-map point.
#[derive(Clone, Copy, Debug)]
pub struct ImprovementPoint {
    pub p: f64,
    pub q: f64,
    pub c_imp: f64,
    pub f_imp: f64,
}

/// Average fidelity, success probability, and shared-pair concurrence over
/// the temperature grid, one row per (t, p) with t as the outer loop.
pub fn sweep_fidelity(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let mut rows = Vec::with_capacity(spec.t_steps * spec.p_values.len());
    for t in spec.t_grid() {
        let mode = HawkingMode::new(t)?;
        for &p in &spec.p_values {
            let config = ProtocolConfig::new(p, spec.q_policy, mode)?;
            rows.push(SweepRow {
                t,
                p,
                q: config.resolved_q(),
                f_av: protocol::average_fidelity(&config)?,
                success: protocol::success_probability(&config)?,
                concurrence: protocol::concurrence_closed(&config)?,
            });
        }
    }
    Ok(rows)
}

/// Shared-pair concurrence under both optimal policies over the grid.
pub fn sweep_concurrence(spec: &SweepSpec) -> Result<Vec<ConcurrenceRow>> {
    spec.validate()?;
    let mut rows = Vec::with_capacity(spec.t_steps * spec.p_values.len());
    for t in spec.t_grid() {
        let mode = HawkingMode::new(t)?;
        for &p in &spec.p_values {
            rows.push(ConcurrenceRow {
                t,
                p,
                c_type1: protocol::concurrence_closed(&ProtocolConfig::new(
                    p,
                    QPolicy::Type1,
                    mode,
                )?)?,
                c_type2: protocol::concurrence_closed(&ProtocolConfig::new(
                    p,
                    QPolicy::Type2,
                    mode,
                )?)?,
            });
        }
    }
    Ok(rows)
}

/// Bare-channel average fidelity under the chosen baseline convention.
pub fn baseline_fidelity(baseline: Baseline, mode: &HawkingMode) -> f64 {
    match baseline {
        Baseline::Paper => (mode.zeta() + 1.0).powi(2) / 4.0,
        Baseline::Consistent => (mode.zeta_sq() + mode.zeta() + 2.0) / 4.0,
    }
}

/// Concurrence and fidelity improvements over the bare channel on the
/// (p, q) ∈ [0, 1)² grid at fixed temperature, p outer, q inner, with
/// spacing 1/resolution.
pub fn improvement_grid(spec: &SweepSpec, t_fixed: f64) -> Result<Vec<ImprovementPoint>> {
    spec.validate()?;
    if !t_fixed.is_finite() || t_fixed < 0.0 {
        return Err(Error::InvalidSpec(format!("grid temperature {t_fixed} must be ≥ 0")));
    }
    let mode = HawkingMode::new(t_fixed)?;
    let c0 = mode.zeta();
    let f0 = baseline_fidelity(spec.baseline, &mode);
    let n = spec.grid_resolution;
    let mut points = Vec::with_capacity(n * n);
    for i in 0..n {
        let p = i as f64 / n as f64;
        for j in 0..n {
            let q = j as f64 / n as f64;
            let config = ProtocolConfig::new(p, QPolicy::Manual(q), mode)?;
            points.push(ImprovementPoint {
                p,
                q,
                c_imp: protocol::concurrence_closed(&config)? - c0,
                f_imp: protocol::average_fidelity(&config)? - f0,
            });
        }
    }
    Ok(points)
}

/// Decimal notation with 12 significant digits; deterministic.
pub fn format_significant(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (11 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

/// A row type that knows its CSV header and field rendering.
pub trait CsvRecord {
    const HEADER: &'static str;
    fn csv_fields(&self) -> String;
}

impl CsvRecord for SweepRow {
    const HEADER: &'static str = "t,p,q,F_av,P,C";

    fn csv_fields(&self) -> String {
        [self.t, self.p, self.q, self.f_av, self.success, self.concurrence]
            .map(format_significant)
            .join(",")
    }
}

impl CsvRecord for ConcurrenceRow {
    const HEADER: &'static str = "t,p,C1,C2";

    fn csv_fields(&self) -> String {
        [self.t, self.p, self.c_type1, self.c_type2]
            .map(format_significant)
            .join(",")
    }
}

impl CsvRecord for ImprovementPoint {
    const HEADER: &'static str = "p,q,C_imp,F_imp";

    fn csv_fields(&self) -> String {
        [self.p, self.q, self.c_imp, self.f_imp]
            .map(format_significant)
            .join(",")
    }
}

/// Writes rows as UTF-8 CSV with a header row and line-feed terminators.
pub fn write_csv<R: CsvRecord>(rows: &[R], path: &Path) -> Result<()> {
    write_csv_with_preamble(rows, &[], path)
}

/// Like [`write_csv`], with `#`-prefixed comment lines above the header.
pub fn write_csv_with_preamble<R: CsvRecord>(
    rows: &[R],
    preamble: &[String],
    path: &Path,
) -> Result<()> {
    let io_err = |source| Error::Io { path: path.to_path_buf(), source };
    let mut body = String::new();
    for line in preamble {
        writeln!(body, "# {line}").expect("writing to a String cannot fail");
    }
    body.push_str(R::HEADER);
    body.push('\n');
    for row in rows {
        body.push_str(&row.csv_fields());
        body.push('\n');
    }
    let mut file = fs::File::create(path).map_err(io_err)?;
    file.write_all(body.as_bytes()).map_err(io_err)?;
    Ok(())
}

#[derive(Parser, Debug)]
#[command(
    name = "hawking-teleport",
    version,
    about = "Weak-measurement-assisted qubit teleportation through the Hawking channel of a Schwarzschild black hole"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one parameter point and print key=value lines
    Point(PointArgs),
    /// Sweep the scaled Hawking temperature and write a CSV table
    Sweep(SweepArgs),
    /// Scan the (p, q) square at fixed temperature and write improvements
    Grid(GridArgs),
}

#[derive(Args, Debug)]
struct PointArgs {
    /// Scaled Hawking temperature T/ω
    #[arg(long)]
    t: f64,
    /// Polar angle of the teleported qubit, in [0, π]
    #[arg(long)]
    theta: f64,
    /// Phase of the teleported qubit, in [0, 2π)
    #[arg(long)]
    delta: f64,
    /// Pre-measurement strength in [0, 1]
    #[arg(long)]
    p: f64,
    /// Manual post-measurement strength in [0, 1]
    #[arg(long, conflicts_with = "q_policy", required_unless_present = "q_policy")]
    q: Option<f64>,
    /// Optimal post-measurement policy
    #[arg(long = "q-policy", value_enum)]
    q_policy: Option<PolicyKind>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum PolicyKind {
    Type1,
    Type2,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long = "t-min", default_value_t = 0.01)]
    t_min: f64,
    #[arg(long = "t-max", default_value_t = 20.0)]
    t_max: f64,
    #[arg(long = "t-steps", default_value_t = 200)]
    t_steps: usize,
    /// Comma-separated pre-measurement strengths
    #[arg(long, value_delimiter = ',', required = true)]
    p: Vec<f64>,
    /// Post-measurement policy: manual:<q>, type1, or type2
    #[arg(long = "q-policy", value_parser = parse_policy)]
    q_policy: QPolicy,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Scaled Hawking temperature T/ω
    #[arg(long)]
    t: f64,
    /// Grid points per axis
    #[arg(long, default_value_t = 201)]
    resolution: usize,
    /// Bare-channel fidelity convention
    #[arg(long, value_enum, default_value_t = Baseline::Paper)]
    baseline: Baseline,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
}

fn parse_policy(s: &str) -> std::result::Result<QPolicy, String> {
    match s {
        "type1" => Ok(QPolicy::Type1),
        "type2" => Ok(QPolicy::Type2),
        other => match other.strip_prefix("manual:") {
            Some(v) => {
                let q: f64 = v.parse().map_err(|_| format!("invalid manual strength `{v}`"))?;
                Ok(QPolicy::Manual(q))
            }
            None => Err(format!("unknown policy `{other}` (expected manual:<q>, type1, type2)")),
        },
    }
}

enum CliFailure {
    /// Bad arguments or an invalid parameter combination: exit code 2.
    Usage(String),
    /// Failure while computing or writing: exit code 1.
    Runtime(Error),
}

fn run(cli: Cli) -> std::result::Result<(), CliFailure> {
    match cli.command {
        Command::Point(args) => {
            let policy = match (args.q, args.q_policy) {
                (Some(q), None) => QPolicy::Manual(q),
                (None, Some(PolicyKind::Type1)) => QPolicy::Type1,
                (None, Some(PolicyKind::Type2)) => QPolicy::Type2,
                _ => unreachable!("clap enforces exactly one of --q/--q-policy"),
            };
            let mode = HawkingMode::new(args.t).map_err(|e| CliFailure::Usage(e.to_string()))?;
            let config = ProtocolConfig::new(args.p, policy, mode)
                .map_err(|e| CliFailure::Usage(e.to_string()))?;
            let input = InputState::new(args.theta, args.delta)
                .map_err(|e| CliFailure::Usage(e.to_string()))?;
            let fidelity =
                protocol::fidelity_closed(&input, &config).map_err(CliFailure::Runtime)?;
            let success =
                protocol::success_probability(&config).map_err(CliFailure::Runtime)?;
            let concurrence =
                protocol::concurrence_closed(&config).map_err(CliFailure::Runtime)?;
            println!("fidelity={}", format_significant(fidelity));
            println!("success_probability={}", format_significant(success));
            println!("concurrence={}", format_significant(concurrence));
            Ok(())
        }
        Command::Sweep(args) => {
            let spec = SweepSpec {
                t_min: args.t_min,
                t_max: args.t_max,
                t_steps: args.t_steps,
                p_values: args.p,
                q_policy: args.q_policy,
                ..SweepSpec::default()
            };
            spec.validate().map_err(|e| CliFailure::Usage(e.to_string()))?;
            let rows = sweep_fidelity(&spec).map_err(CliFailure::Runtime)?;
            write_csv(&rows, &args.out).map_err(CliFailure::Runtime)?;
            println!("wrote {} rows to {}", rows.len(), args.out.display());
            Ok(())
        }
        Command::Grid(args) => {
            let spec = SweepSpec {
                grid_resolution: args.resolution,
                baseline: args.baseline,
                ..SweepSpec::default()
            };
            spec.validate().map_err(|e| CliFailure::Usage(e.to_string()))?;
            if !args.t.is_finite() || args.t < 0.0 {
                return Err(CliFailure::Usage(format!(
                    "grid temperature {} must be ≥ 0",
                    args.t
                )));
            }
            let mode = HawkingMode::new(args.t).map_err(|e| CliFailure::Usage(e.to_string()))?;
            let points = improvement_grid(&spec, args.t).map_err(CliFailure::Runtime)?;
            // The two baseline fidelities differ; record which one was
            // subtracted so the map is interpretable on its own.
            let preamble = vec![format!(
                "t={}, baseline={}: F0={}, C0={} (other convention would give F0={})",
                format_significant(args.t),
                match spec.baseline {
                    Baseline::Paper => "paper",
                    Baseline::Consistent => "consistent",
                },
                format_significant(baseline_fidelity(spec.baseline, &mode)),
                format_significant(mode.zeta()),
                format_significant(baseline_fidelity(
                    match spec.baseline {
                        Baseline::Paper => Baseline::Consistent,
                        Baseline::Consistent => Baseline::Paper,
                    },
                    &mode
                )),
            )];
            write_csv_with_preamble(&points, &preamble, &args.out).map_err(CliFailure::Runtime)?;
            println!("wrote {} points to {}", points.len(), args.out.display());
            Ok(())
        }
    }
}

/// Command-line entry point. Returns the process exit code: 0 on success,
/// 2 on argument errors, 1 on runtime errors.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(CliFailure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliFailure::Runtime(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_significant(0.0), "0");
        assert_eq!(format_significant(1.0), "1.00000000000");
        assert_eq!(format_significant(20.0), "20.0000000000");
        assert_eq!(format_significant(0.5249791874789399), "0.524979187479");
        assert_eq!(format_significant(-0.001234567890123), "-0.00123456789012");
    }

    #[test]
    fn default_spec_is_valid() {
        SweepSpec::default().validate().unwrap();
    }

    #[test]
    fn spec_rejects_bad_fields() {
        let mut spec = SweepSpec { t_min: -1.0, ..SweepSpec::default() };
        assert!(spec.validate().is_err());
        spec.t_min = 5.0;
        spec.t_max = 1.0;
        assert!(spec.validate().is_err());
        spec.t_max = 10.0;
        spec.t_steps = 1;
        assert!(spec.validate().is_err());
        spec.t_steps = 10;
        spec.p_values = vec![1.0];
        assert!(spec.validate().is_err());
    }

    #[test]
    fn bare_sweep_is_monotone_decreasing() {
        let spec = SweepSpec { t_steps: 50, ..SweepSpec::default() };
        let rows = sweep_fidelity(&spec).unwrap();
        assert_eq!(rows.len(), 50);
        for pair in rows.windows(2) {
            assert!(pair[1].f_av < pair[0].f_av);
        }
    }

    #[test]
    fn strong_pre_measurement_sweep_stays_near_one() {
        let spec = SweepSpec {
            p_values: vec![1.0 - 1e-3],
            q_policy: QPolicy::Type1,
            t_steps: 50,
            ..SweepSpec::default()
        };
        for row in sweep_fidelity(&spec).unwrap() {
            assert!(row.f_av >= 0.999, "F_av {} at t {}", row.f_av, row.t);
        }
    }

    #[test]
    fn type2_dominates_type1_in_fidelity_but_not_success() {
        let base = SweepSpec { p_values: vec![0.5], t_steps: 40, ..SweepSpec::default() };
        let rows1 =
            sweep_fidelity(&SweepSpec { q_policy: QPolicy::Type1, ..base.clone() }).unwrap();
        let rows2 =
            sweep_fidelity(&SweepSpec { q_policy: QPolicy::Type2, ..base }).unwrap();
        for (r1, r2) in rows1.iter().zip(&rows2) {
            assert!(r2.f_av >= r1.f_av - 1e-12);
            assert!(r2.success <= r1.success + 1e-12);
        }
    }

    #[test]
    fn sweep_rows_match_direct_protocol_calls_exactly() {
        let spec = SweepSpec {
            p_values: vec![0.2, 0.7],
            q_policy: QPolicy::Type2,
            t_steps: 11,
            ..SweepSpec::default()
        };
        for row in sweep_fidelity(&spec).unwrap() {
            let config =
                ProtocolConfig::new(row.p, spec.q_policy, HawkingMode::new(row.t).unwrap())
                    .unwrap();
            assert_eq!(row.f_av, protocol::average_fidelity(&config).unwrap());
            assert_eq!(row.success, protocol::success_probability(&config).unwrap());
            assert_eq!(row.concurrence, protocol::concurrence_closed(&config).unwrap());
        }
    }

    #[test]
    fn concurrence_sweep_trends() {
        let spec = SweepSpec {
            t_min: 0.0,
            t_max: 20.0,
            t_steps: 21,
            p_values: vec![0.0, 0.5, 0.9],
            ..SweepSpec::default()
        };
        let rows = sweep_concurrence(&spec).unwrap();
        for row in &rows {
            let zeta = HawkingMode::new(row.t).unwrap().zeta();
            assert!(row.c_type1 >= zeta - 1e-12);
            assert!(row.c_type2 >= zeta - 1e-12);
            if row.t == 0.0 {
                assert_abs_diff_eq!(row.c_type1, 1.0, epsilon = 1e-12);
                assert_abs_diff_eq!(row.c_type2, 1.0, epsilon = 1e-12);
            }
        }
        // Branch matching at p = 0.9 on a hot horizon: C = 2/(2 + 0.1·η²).
        let hot = rows.iter().find(|r| r.t == 20.0 && r.p == 0.9).unwrap();
        assert_abs_diff_eq!(hot.c_type1, 0.9762048789962261, epsilon = 1e-12);
    }

    #[test]
    fn fidelity_and_concurrence_improvements_can_decouple() {
        // Somewhere on the temperature-10 concurrence sweep the
        // higher-fidelity policy carries less entanglement.
        let spec = SweepSpec {
            t_min: 0.5,
            t_max: 15.0,
            t_steps: 30,
            p_values: vec![0.3, 0.6, 0.9],
            ..SweepSpec::default()
        };
        let mut found = false;
        for row in sweep_concurrence(&spec).unwrap() {
            let mode = HawkingMode::new(row.t).unwrap();
            let f1 = protocol::average_fidelity(
                &ProtocolConfig::new(row.p, QPolicy::Type1, mode).unwrap(),
            )
            .unwrap();
            let f2 = protocol::average_fidelity(
                &ProtocolConfig::new(row.p, QPolicy::Type2, mode).unwrap(),
            )
            .unwrap();
            if f2 > f1 && row.c_type2 < row.c_type1 {
                found = true;
                break;
            }
        }
        assert!(found, "expected a point with higher fidelity but lower concurrence");
    }

    #[test]
    fn improvement_grid_conventions() {
        let spec = SweepSpec {
            grid_resolution: 21,
            baseline: Baseline::Consistent,
            ..SweepSpec::default()
        };
        let points = improvement_grid(&spec, 10.0).unwrap();
        let origin = &points[0];
        assert_eq!(origin.p, 0.0);
        assert_eq!(origin.q, 0.0);
        assert_eq!(origin.c_imp, 0.0);
        assert_eq!(origin.f_imp, 0.0);

        let spec = SweepSpec { grid_resolution: 21, ..SweepSpec::default() };
        let points = improvement_grid(&spec, 10.0).unwrap();
        let zeta = HawkingMode::new(10.0).unwrap().zeta();
        assert_abs_diff_eq!(points[0].f_imp, (1.0 - zeta) / 4.0, epsilon = 1e-14);
        assert!(points[0].f_imp > 0.0);
        // The decoupling region: fidelity gained, entanglement lost.
        assert!(points.iter().any(|pt| pt.f_imp > 0.0 && pt.c_imp < 0.0));
    }

    #[test]
    fn improvement_grid_rejects_negative_temperature() {
        let err = improvement_grid(&SweepSpec::default(), -1.0).unwrap_err();
        assert!(matches!(err, Error::InvalidSpec(_)));
    }

    #[test]
    fn csv_output_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let spec = SweepSpec { t_steps: 20, p_values: vec![0.0, 0.5], ..SweepSpec::default() };
        let rows = sweep_fidelity(&spec).unwrap();
        let path_a = dir.path().join("a.csv");
        let path_b = dir.path().join("b.csv");
        write_csv(&rows, &path_a).unwrap();
        write_csv(&sweep_fidelity(&spec).unwrap(), &path_b).unwrap();
        let a = fs::read(&path_a).unwrap();
        let b = fs::read(&path_b).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("t,p,q,F_av,P,C\n"));
        assert!(text.ends_with('\n'));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn csv_errors_carry_the_path() {
        let rows = sweep_fidelity(&SweepSpec { t_steps: 2, ..SweepSpec::default() }).unwrap();
        let err = write_csv(&rows, Path::new("/nonexistent-dir/out.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/out.csv"));
    }
}
