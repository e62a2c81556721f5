use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use irsim::channel::PhaseShifts;
use irsim::config::{read_scenario_file, ScenarioFile};
use irsim::design::{Phases, SystemDesign};
use irsim::montecarlo::{estimate_gamma_mc, McConfig, Verification};
use irsim::optimize::{InitMode, OptimizerConfig};
use irsim::report::{analyze_design, optimize_system, system_regime, PowerReport};
use irsim::scenario::{Rician, SystemKind};
use irsim::sweep::{run_sweep, DesignKind, ResultRow, CSV_HEADER};
use irsim::Scenario64;

const EXIT_VERIFY_FAILED: u8 = 1;
/// Any error: bad config, bad flags, unreadable or unwritable files.
const EXIT_ERROR: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "irsim", version, about = "Double-IRS channel simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Scenario JSON; built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Overrides the scenario seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte-Carlo samples.
    #[arg(long, global = true, default_value_t = 100_000)]
    samples: usize,
    #[arg(long = "max-iters", global = true, default_value_t = 500)]
    max_iters: usize,
    /// Relative improvement below which coordinate descent stops.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Comma-separated systems: dirs_c, dirs_nc, sirs_pos1, sirs_pos2, sirs_pos_mid, no_irs.
    #[arg(long, global = true, value_delimiter = ',')]
    system: Vec<String>,
    /// Comma-separated designs: optimized, random, pure_los_design, pure_nlos_design.
    #[arg(long, global = true, value_delimiter = ',')]
    design: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Case, regime, average power and rate bound of one design.
    Analyze {
        /// Phase JSON to evaluate; zero phases when omitted and no --design is given.
        #[arg(long)]
        phases: Option<PathBuf>,
    },
    /// Optimize phases; with --output DIR writes report.json, phases.json and trace.csv.
    Optimize,
    /// Run the sweep section of the config and write CSV.
    Sweep,
    /// Compare every applicable analytic formula with Monte-Carlo.
    Verify {
        /// Scales every analytic value by 1.05 before comparing.
        #[arg(long, hide = true)]
        corrupt: bool,
    },
}

/// Phases in radians per IRS.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PhaseFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    irs1: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    irs2: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    irs0: Option<Vec<f64>>,
}

impl PhaseFile {
    fn of(d: &SystemDesign<f64>) -> Self {
        match &d.phases {
            Phases::Dual(p) => Self {
                irs1: Some(p.phi1.to_vec()),
                irs2: Some(p.phi2.to_vec()),
                irs0: None,
            },
            Phases::Single(p) => Self {
                irs0: Some(p.to_vec()),
                ..Self::default()
            },
            _ => Self::default(),
        }
    }

    fn design(self, kind: SystemKind) -> anyhow::Result<SystemDesign<f64>> {
        let phases = match kind {
            SystemKind::DirsC | SystemKind::DirsNc => {
                let (Some(a), Some(b)) = (self.irs1, self.irs2) else {
                    return Err(anyhow!("phase file needs `irs1` and `irs2` for {kind}"));
                };
                Phases::Dual(PhaseShifts::new(a.into(), b.into())?)
            }
            SystemKind::NoIrs => Phases::Direct,
            _ => {
                let p = self
                    .irs0
                    .ok_or_else(|| anyhow!("phase file needs `irs0` for {kind}"))?;
                Phases::Single(p.into())
            }
        };
        Ok(SystemDesign::new(kind, phases)?)
    }
}

fn parse_systems(names: &[String], default: &[SystemKind]) -> anyhow::Result<Vec<SystemKind>> {
    if names.is_empty() {
        return Ok(default.to_vec());
    }
    names
        .iter()
        .map(|n| SystemKind::parse(n).ok_or_else(|| anyhow!("unknown system `{n}`")))
        .collect()
}

fn parse_designs(names: &[String]) -> anyhow::Result<Vec<DesignKind>> {
    names
        .iter()
        .map(|n| {
            serde_json::from_value(serde_json::Value::String(n.clone()))
                .map_err(|_| anyhow!("unknown design `{n}`"))
        })
        .collect()
}

struct Ctx {
    file: ScenarioFile,
    scenario: Scenario64,
    mc: McConfig,
    opt: OptimizerConfig<f64>,
}

impl Ctx {
    fn load(c: &Common) -> anyhow::Result<Self> {
        let mut file = match &c.config {
            Some(p) => read_scenario_file(p)?,
            None => ScenarioFile::default(),
        };
        if let Some(seed) = c.seed {
            file.seed = Some(seed);
        }
        let scenario = file.resolve()?;
        if c.samples == 0 {
            return Err(anyhow!("--samples must be at least 1"));
        }
        if c.max_iters == 0 {
            return Err(anyhow!("--max-iters must be at least 1"));
        }
        if !(c.tol > 0.0 && c.tol.is_finite()) {
            return Err(anyhow!("--tol must be positive"));
        }
        let mc = McConfig::new(c.samples, scenario.seed);
        let opt = OptimizerConfig {
            max_iterations: c.max_iters,
            rel_tolerance: c.tol,
            init: InitMode::Zeros,
            psi: 0.0,
        };
        Ok(Self {
            file,
            scenario,
            mc,
            opt,
        })
    }
}

fn design_scenario(s: &Scenario64, d: DesignKind) -> Scenario64 {
    match d {
        DesignKind::PureLosDesign => s.with_rician(Rician::PureLos),
        DesignKind::PureNlosDesign => s.with_rician(Rician::PureNlos),
        _ => s.clone(),
    }
}

/// Scenario and design for one `(system, design)` choice.
fn build_design(
    ctx: &Ctx,
    kind: SystemKind,
    d: DesignKind,
) -> anyhow::Result<(Scenario64, SystemDesign<f64>)> {
    let s = design_scenario(&ctx.scenario, d);
    let design = match d {
        DesignKind::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.mc.seed);
            SystemDesign::random(&s, kind, &mut rng)?
        }
        _ => optimize_system(&s, kind, &ctx.opt)?.design,
    };
    Ok((s, design))
}

fn write_out(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn single_system(c: &Common) -> anyhow::Result<SystemKind> {
    let systems = parse_systems(&c.system, &[SystemKind::DirsC])?;
    match systems.as_slice() {
        [k] => Ok(*k),
        _ => Err(anyhow!("this command takes exactly one --system")),
    }
}

fn single_design(c: &Common) -> anyhow::Result<Option<DesignKind>> {
    let designs = parse_designs(&c.design)?;
    match designs.as_slice() {
        [] => Ok(None),
        [d] => Ok(Some(*d)),
        _ => Err(anyhow!("this command takes at most one --design")),
    }
}

fn cmd_analyze(c: &Common, phases: Option<&Path>) -> anyhow::Result<u8> {
    let ctx = Ctx::load(c)?;
    let kind = single_system(c)?;
    let design = single_design(c)?;
    let report = match (phases, design) {
        (Some(_), Some(_)) => return Err(anyhow!("give either --phases or --design")),
        (Some(p), None) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let pf: PhaseFile = serde_json::from_str(&text)?;
            let d = pf.design(kind)?;
            analyze_design(&ctx.scenario, &d)?
        }
        (None, None) => analyze_design(&ctx.scenario, &SystemDesign::zeros(&ctx.scenario, kind)?)?,
        (None, Some(d)) => {
            let (s, design) = build_design(&ctx, kind, d)?;
            analyze_design(&s, &design)?
        }
    };
    write_out(c.output.as_deref(), &to_json(&report)?)?;
    Ok(0)
}

fn trace_csv(report: &PowerReport) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["iteration", "objective"])?;
    for (i, v) in report.objective.iter().enumerate() {
        w.write_record([i.to_string(), v.to_string()])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn cmd_optimize(c: &Common) -> anyhow::Result<u8> {
    let ctx = Ctx::load(c)?;
    let kind = single_system(c)?;
    let design = single_design(c)?.unwrap_or(DesignKind::Optimized);
    if design == DesignKind::Random {
        return Err(anyhow!("optimize does not take --design random"));
    }
    let s = design_scenario(&ctx.scenario, design);
    let mut o = optimize_system(&s, kind, &ctx.opt)?;
    if o.report.objective.is_empty() {
        o.report.objective.push(o.report.gamma);
    }
    let phases = PhaseFile::of(&o.design);
    match &c.output {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            fs::write(dir.join("report.json"), to_json(&o.report)?)?;
            fs::write(dir.join("phases.json"), to_json(&phases)?)?;
            fs::write(dir.join("trace.csv"), trace_csv(&o.report)?)?;
        }
        None => {
            #[derive(Serialize)]
            struct Both<'a> {
                report: &'a PowerReport,
                phases: &'a PhaseFile,
            }
            write_out(
                None,
                &to_json(&Both {
                    report: &o.report,
                    phases: &phases,
                })?,
            )?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct SweepSummary<'a> {
    variable: &'a str,
    values: &'a [f64],
    rows: usize,
    seed: u64,
    samples: usize,
}

fn cmd_sweep(c: &Common) -> anyhow::Result<u8> {
    let ctx = Ctx::load(c)?;
    let mut spec = ctx
        .file
        .sweep
        .clone()
        .ok_or_else(|| anyhow!("config has no `sweep` section"))?;
    spec.systems = parse_systems(&c.system, &spec.systems)?;
    let designs = parse_designs(&c.design)?;
    if !designs.is_empty() {
        spec.designs = designs;
    }
    spec.validate()?;
    let rows = run_sweep(&ctx.file, &spec, &ctx.mc, &ctx.opt)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in &rows {
        write_row(&mut w, r)?;
    }
    let text = String::from_utf8(w.into_inner()?)?;
    write_out(c.output.as_deref(), &text)?;
    if let Some(p) = &c.output {
        let summary = SweepSummary {
            variable: spec.variable.name(),
            values: &spec.values,
            rows: rows.len(),
            seed: ctx.mc.seed,
            samples: ctx.mc.num_samples,
        };
        fs::write(p.with_extension("summary.json"), to_json(&summary)?)?;
    }
    Ok(0)
}

fn opt_string<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn write_row<W: Write>(w: &mut csv::Writer<W>, r: &ResultRow) -> anyhow::Result<()> {
    w.write_record([
        r.sweep_variable.clone(),
        r.sweep_value.to_string(),
        r.system.clone(),
        r.design.clone(),
        r.metric.clone(),
        r.value.to_string(),
        opt_string(r.std_error),
        opt_string(r.iterations),
    ])?;
    Ok(())
}

#[derive(Serialize)]
struct VerifyRow {
    system: SystemKind,
    design: DesignKind,
    regime: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    case: Option<String>,
    #[serde(flatten)]
    check: Verification,
}

#[derive(Serialize)]
struct VerifySummary {
    samples: usize,
    seed: u64,
    passed: bool,
    checks: Vec<VerifyRow>,
}

fn cmd_verify(c: &Common, corrupt: bool) -> anyhow::Result<u8> {
    let ctx = Ctx::load(c)?;
    let systems = parse_systems(&c.system, &SystemKind::ALL)?;
    let mut designs = parse_designs(&c.design)?;
    if designs.is_empty() {
        designs = vec![DesignKind::Optimized, DesignKind::Random];
    }
    let scale = if corrupt { 1.05 } else { 1.0 };
    let mut rows = Vec::new();
    for &kind in &systems {
        for &d in &designs {
            let (s, design) = build_design(&ctx, kind, d)?;
            let report = analyze_design(&s, &design)?;
            let est = estimate_gamma_mc(&s, &design, &ctx.mc)?;
            rows.push(VerifyRow {
                system: kind,
                design: d,
                regime: system_regime(&s, kind)?.name().to_string(),
                case: report.case,
                check: Verification::compare(report.gamma * scale, est),
            });
        }
    }
    let passed = rows.iter().all(|r| r.check.pass);
    let mut out = io::stdout().lock();
    writeln!(
        out,
        "{:<13} {:<17} {:<10} {:<6} {:>14} {:>14} {:>8}  result",
        "system", "design", "regime", "case", "analytic", "mc_mean", "z"
    )?;
    for r in &rows {
        let z = r
            .check
            .z
            .map(|z| format!("{z:.3}"))
            .unwrap_or_else(|| "exact".into());
        writeln!(
            out,
            "{:<13} {:<17} {:<10} {:<6} {:>14.6e} {:>14.6e} {:>8}  {}",
            r.system.name(),
            serde_json::to_value(r.design)?.as_str().unwrap_or_default(),
            r.regime,
            r.case.as_deref().unwrap_or("-"),
            r.check.analytic,
            r.check.estimate.mean,
            z,
            if r.check.pass { "pass" } else { "FAIL" }
        )?;
    }
    if let Some(p) = &c.output {
        let summary = VerifySummary {
            samples: ctx.mc.num_samples,
            seed: ctx.mc.seed,
            passed,
            checks: rows,
        };
        fs::write(p, to_json(&summary)?).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(if passed { 0 } else { EXIT_VERIFY_FAILED })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Analyze { phases } => cmd_analyze(&cli.common, phases.as_deref()),
        Command::Optimize => cmd_optimize(&cli.common),
        Command::Sweep => cmd_sweep(&cli.common),
        Command::Verify { corrupt } => cmd_verify(&cli.common, *corrupt),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
