use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;
use std::time::Instant;

use clap::Args;
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use gmix::bessel::{run_audit, AuditConfig, EtaParams};
use gmix::budget::{sub_budgets, validate_plan};
use gmix::field::{parseval_check, QuadratureConfig, SpectralFunction};
use gmix::frame::{CurveletIndex, Frame};
use gmix::gaussmix::{approximate_curvelet, budget_to_h, GeneratorApprox, SchemeConfig};
use gmix::scheme::{
    approximate, rate_study, rearrange, ApproxConfig, EnvelopeConfig, PairEngine, Profile, RateConfig, Target,
};

use crate::config::{FileConfig, Resolver};
use crate::output::{mixture_json, write_atomic};
use crate::{Cli, CliError, Command};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Args, Debug)]
pub struct FrameCheckArgs {
    #[arg(long)]
    j_max: Option<u32>,
    #[arg(long)]
    samples: Option<usize>,
    /// Also run the tight-frame check on a single curvelet
    #[arg(long)]
    parseval: bool,
    #[arg(long)]
    parseval_scale: Option<u32>,
    /// Translation truncation radius for the tight-frame check
    #[arg(long)]
    radius: Option<f64>,
    /// Quadrature cells per box side
    #[arg(long)]
    cells: Option<usize>,
}

#[derive(Args, Debug)]
pub struct BudgetArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    n0: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SchemeArgs {
    #[arg(long)]
    r0: Option<f64>,
    /// Order of the difference stencil
    #[arg(long)]
    order: Option<u32>,
    #[arg(long)]
    cells: Option<usize>,
}

#[derive(Args, Debug)]
pub struct GenApproxArgs {
    #[arg(long)]
    j: Option<u32>,
    #[arg(long)]
    m: Option<usize>,
    /// Grid points per side for the weighted-error sweep
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[command(flatten)]
    scheme: SchemeArgs,
}

#[derive(Args, Debug)]
pub struct CurveletApproxArgs {
    #[arg(long)]
    j: Option<u32>,
    #[arg(long)]
    l: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    k1: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    k2: Option<i64>,
    #[arg(long)]
    m: Option<usize>,
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Spatial decay radius of generators, in generator coordinates
    #[arg(long)]
    generator_radius: Option<f64>,
}

#[derive(Args, Debug)]
pub struct ApproxArgs {
    /// JSON array of {omega, j, l, k1, k2}
    #[arg(long)]
    coeffs: std::path::PathBuf,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    n0: Option<usize>,
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long)]
    generator_radius: Option<f64>,
}

#[derive(Args, Debug)]
pub struct RateArgs {
    /// power or cartoon
    #[arg(long)]
    profile: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Comma-separated budgets
    #[arg(long)]
    n_list: Option<String>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    n0: Option<usize>,
    /// Number of synthetic coefficients
    #[arg(long)]
    length: Option<usize>,
    #[arg(long)]
    j_cap: Option<u32>,
    #[arg(long)]
    k_radius: Option<i64>,
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long)]
    generator_radius: Option<f64>,
}

#[derive(Args, Debug)]
pub struct AuditArgs {
    #[arg(long)]
    j_max: Option<u32>,
    #[arg(long)]
    j_low: Option<u32>,
    /// Sector and rho samples
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    star_samples: Option<usize>,
    #[arg(long)]
    row_samples: Option<usize>,
    #[arg(long)]
    row_j_max: Option<u32>,
    /// Lattice truncation radius for row sums
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    eta_j: Option<f64>,
    #[arg(long)]
    eta_k: Option<f64>,
}

struct Ctx<'a> {
    cli: &'a Cli,
    r: Resolver,
    command: &'static str,
}

impl Ctx<'_> {
    fn seconds(&self, start: Instant) -> f64 {
        if self.cli.record_timing {
            start.elapsed().as_secs_f64()
        } else {
            0.0
        }
    }

    fn write_json(&self, name: &str, result: Value) -> Result<(), CliError> {
        let doc = json!({
            "tool": "gmix",
            "version": VERSION,
            "command": self.command,
            "config": self.r.resolved,
            "result": result,
        });
        let text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))? + "\n";
        write_atomic(&self.cli.out.join(name), &text)
    }

    fn write_text(&self, name: &str, text: &str) -> Result<(), CliError> {
        write_atomic(&self.cli.out.join(name), text)
    }

    fn scheme(&mut self, a: &SchemeArgs) -> Result<SchemeConfig, CliError> {
        let d = SchemeConfig::default();
        let mut quad = QuadratureConfig::default();
        quad.cells = self.r.get("cells", a.cells, quad.cells)?;
        let cfg = SchemeConfig {
            r0: self.r.get("r0", a.r0, d.r0)?,
            order: self.r.get("order", a.order, d.order)?,
            quad,
            ..d
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn envelope(&mut self, radius: Option<f64>) -> Result<EnvelopeConfig, CliError> {
        let d = EnvelopeConfig::default();
        let generator_radius = self.r.get("generator_radius", radius, d.generator_radius)?;
        if !(generator_radius > 0.0 && generator_radius.is_finite()) {
            return Err(CliError::Invalid("generator_radius must be positive".into()));
        }
        Ok(EnvelopeConfig { generator_radius, ..d })
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn check_beta(beta: f64) -> Result<(), CliError> {
    if beta > 0.0 && beta < 1.0 {
        Ok(())
    } else {
        Err(CliError::Invalid(format!("beta must lie in (0, 1), got {beta}")))
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let name = match &cli.command {
        Command::FrameCheck(_) => "frame-check",
        Command::Budget(_) => "budget",
        Command::GenApprox(_) => "gen-approx",
        Command::CurveletApprox(_) => "curvelet-approx",
        Command::Approx(_) => "approx",
        Command::Rate(_) => "rate",
        Command::BesselAudit(_) => "bessel-audit",
        Command::Version => {
            println!("gmix {VERSION}");
            return Ok(());
        }
    };
    let mut ctx = Ctx {
        cli,
        r: Resolver::new(file),
        command: name,
    };
    match &cli.command {
        Command::FrameCheck(a) => frame_check(&mut ctx, a),
        Command::Budget(a) => budget(&mut ctx, a),
        Command::GenApprox(a) => gen_approx(&mut ctx, a),
        Command::CurveletApprox(a) => curvelet_approx(&mut ctx, a),
        Command::Approx(a) => approx(&mut ctx, a),
        Command::Rate(a) => rate(&mut ctx, a),
        Command::BesselAudit(a) => bessel_audit(&mut ctx, a),
        Command::Version => unreachable!(),
    }
}

fn frame_check(ctx: &mut Ctx, a: &FrameCheckArgs) -> Result<(), CliError> {
    let j_max = ctx.r.get("j_max", a.j_max, 8)?;
    let samples = ctx.r.get("samples", a.samples, 100_000)?;
    let seed = ctx.r.get("seed", ctx.cli.seed, 1)?;
    let parseval = ctx.r.get("parseval", a.parseval.then_some(true), false)?;
    let scale = ctx.r.get("parseval_scale", a.parseval_scale, 4)?;
    let radius = ctx.r.get("radius", a.radius, 64.0)?;
    let mut quad = QuadratureConfig::default();
    quad.cells = ctx.r.get("cells", a.cells, quad.cells)?;
    ctx.r.finish()?;
    if j_max > 60 {
        return Err(CliError::Invalid("j_max must be at most 60".into()));
    }
    let start = Instant::now();
    let frame = Frame::default();
    let limit = 2.0 * PI / 3.0 * 2f64.powi(j_max as i32);
    let mut rng = Pcg64::seed_from_u64(seed);
    let points: Vec<[f64; 2]> = (0..samples)
        .map(|_| {
            let r = limit * rng.gen::<f64>().sqrt();
            let t = rng.gen_range(-PI..PI);
            [r * t.cos(), r * t.sin()]
        })
        .collect();
    let devs: Vec<f64> = points
        .par_iter()
        .map(|&xi| frame.pu_total(xi, j_max).map(|v| (v - 1.0).abs()))
        .collect::<Result<_, _>>()?;
    let max_dev = devs.iter().copied().fold(0.0, f64::max);
    let pu_pass = max_dev <= 1e-8;
    let mut result = json!({
        "partition": {"samples": samples, "j_max": j_max, "max_deviation": max_dev, "bound": 1e-8, "pass": pu_pass},
    });
    let mut pass = pu_pass;
    if parseval {
        let idx = CurveletIndex::new(scale, 0, [0, 0])?;
        let f = SpectralFunction::from_curvelets(frame, &[(1.0, idx)]);
        let rep = parseval_check(&f, &quad, radius)?;
        let ok = (0.999..=1.001).contains(&rep.ratio);
        pass &= ok;
        result["parseval"] = json!({"report": to_value(&rep), "pass": ok});
    }
    result["pass"] = json!(pass);
    result["seconds"] = json!(ctx.seconds(start));
    println!("partition max deviation {max_dev:.3e} ({})", if pu_pass { "pass" } else { "FAIL" });
    if let Some(p) = result.get("parseval") {
        println!("tight-frame ratio {} ({})", p["report"]["ratio"], if p["pass"] == json!(true) { "pass" } else { "FAIL" });
    }
    ctx.write_json("frame_check.json", result)
}

fn budget(ctx: &mut Ctx, a: &BudgetArgs) -> Result<(), CliError> {
    let n = ctx.r.get("n", a.n, 256)?;
    let beta = ctx.r.get("beta", a.beta, 0.5)?;
    let n0 = ctx.r.get("n0", a.n0, 3)?;
    ctx.r.finish()?;
    check_beta(beta)?;
    let plan = sub_budgets(n, beta, n0)?;
    let report = validate_plan(&plan);
    println!("m_star {} spend {} of {}", plan.m_star, plan.spend(), n);
    ctx.write_json(
        "budget.json",
        json!({
            "m_star": plan.m_star,
            "sub_budgets": plan.sequence(),
            "spend": plan.spend(),
            "plan": to_value(&plan),
            "validation": to_value(&report),
        }),
    )
}

fn gen_approx(ctx: &mut Ctx, a: &GenApproxArgs) -> Result<(), CliError> {
    let j = ctx.r.get("j", a.j, 4)?;
    let m = ctx.r.get("m", a.m, 108)?;
    let grid = ctx.r.get("grid", a.grid, 24)?;
    let samples = ctx.r.get("samples", a.samples, 200)?;
    let seed = ctx.r.get("seed", ctx.cli.seed, 1)?;
    let cfg = ctx.scheme(&a.scheme)?;
    ctx.r.finish()?;
    let start = Instant::now();
    let g = GeneratorApprox::build(j, m, &cfg)?;
    let extent = cfg.r0;
    let sup = g.weighted_error_sup(extent, grid, samples, seed);
    let line: Vec<Value> = (0..=16)
        .map(|i| {
            let t = extent * i as f64 / 16.0;
            let xi = [t, 0.5 * t];
            json!({"xi": xi, "weighted_error": g.weighted_error(xi)})
        })
        .collect();
    println!("j {j} budget {m}: {} terms, sup weighted error {sup:.6e}", g.mixture.len());
    ctx.write_text("gen_mixture.json", &mixture_json(&g.mixture))?;
    let seconds = ctx.seconds(start);
    ctx.write_json(
        "gen_approx.json",
        json!({
            "j": j,
            "budget": m,
            "h": g.h,
            "term_count": g.mixture.len(),
            "weighted_error_sup": sup,
            "sup_extent": extent,
            "samples": line,
            "seconds": seconds,
        }),
    )
}

fn curvelet_approx(ctx: &mut Ctx, a: &CurveletApproxArgs) -> Result<(), CliError> {
    let j = ctx.r.get("j", a.j, 0)?;
    let l = ctx.r.get("l", a.l, 0)?;
    let k1 = ctx.r.get("k1", a.k1, 0)?;
    let k2 = ctx.r.get("k2", a.k2, 0)?;
    let m = ctx.r.get("m", a.m, 36)?;
    let cfg = ctx.scheme(&a.scheme)?;
    let env = ctx.envelope(a.generator_radius)?;
    ctx.r.finish()?;
    let start = Instant::now();
    let idx = CurveletIndex::new(j, l, [k1, k2])?;
    let h = budget_to_h(m, j, &cfg)?;
    let mix = approximate_curvelet(&idx, m, &cfg)?;
    let seq = rearrange(&[(1.0, idx)])?;
    let mut engine = PairEngine::new(cfg.frame, env);
    let target = Target::new(&seq, &mut engine);
    let (err, _, _) = target.errors(&mut engine, &mix, 1);
    println!("{idx}: {} terms, L2 error {err:.6e} of norm {:.6e}", mix.len(), target.norm_sq.sqrt());
    ctx.write_text("curvelet_mixture.json", &mixture_json(&mix))?;
    let seconds = ctx.seconds(start);
    ctx.write_json(
        "curvelet_approx.json",
        json!({
            "index": to_value(&idx),
            "budget": m,
            "h": h,
            "term_count": mix.len(),
            "l2_error": err,
            "l2_norm": target.norm_sq.sqrt(),
            "seconds": seconds,
        }),
    )
}

#[derive(Deserialize)]
struct CoeffEntry {
    omega: f64,
    j: u32,
    l: u32,
    k1: i64,
    k2: i64,
}

fn read_coeffs(path: &Path) -> Result<Vec<(f64, CurveletIndex)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
    let raw: Vec<CoeffEntry> =
        serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    raw.into_iter()
        .map(|c| Ok((c.omega, CurveletIndex::new(c.j, c.l, [c.k1, c.k2])?)))
        .collect()
}

fn approx(ctx: &mut Ctx, a: &ApproxArgs) -> Result<(), CliError> {
    let n = ctx.r.get("n", a.n, 1024)?;
    let beta = ctx.r.get("beta", a.beta, 0.5)?;
    let n0 = ctx.r.get("n0", a.n0, 3)?;
    let scheme = ctx.scheme(&a.scheme)?;
    let envelope = ctx.envelope(a.generator_radius)?;
    ctx.r.resolved.insert("coeffs".into(), a.coeffs.display().to_string());
    ctx.r.finish()?;
    check_beta(beta)?;
    let seq = rearrange(&read_coeffs(&a.coeffs)?)?;
    let cfg = ApproxConfig { n0, scheme, envelope };
    let (mix, mut report) = approximate(&seq, n, beta, &cfg)?;
    if !ctx.cli.record_timing {
        report.seconds = 0.0;
    }
    println!(
        "m_star {}, {} terms of {}, error {:.6e} (I+ {:.6e}, I- {:.6e})",
        report.m_star, report.terms_used, n, report.total_error, report.i_plus, report.i_minus
    );
    ctx.write_text("mixture.json", &mixture_json(&mix))?;
    ctx.write_json("approx_report.json", to_value(&report))
}

fn rate(ctx: &mut Ctx, a: &RateArgs) -> Result<(), CliError> {
    let profile_name = ctx.r.get("profile", a.profile.clone(), "power".to_string())?;
    let alpha = ctx.r.get("alpha", a.alpha, 1.5)?;
    let list = ctx.r.get("n_list", a.n_list.clone(), "256,512,1024,2048,4096,8192".to_string())?;
    let beta = ctx.r.get("beta", a.beta, 0.5)?;
    let n0 = ctx.r.get("n0", a.n0, 3)?;
    let seed = ctx.r.get("seed", ctx.cli.seed, 1)?;
    let d = RateConfig::default();
    let length = ctx.r.get("length", a.length, d.length)?;
    let j_cap = ctx.r.get("j_cap", a.j_cap, d.j_cap)?;
    let k_radius = ctx.r.get("k_radius", a.k_radius, d.k_radius)?;
    let scheme = ctx.scheme(&a.scheme)?;
    let envelope = ctx.envelope(a.generator_radius)?;
    ctx.r.finish()?;
    check_beta(beta)?;
    let profile = match profile_name.as_str() {
        "power" if alpha > 0.5 => Profile::Power { alpha },
        "power" => return Err(CliError::Invalid(format!("alpha must exceed 1/2, got {alpha}"))),
        "cartoon" => Profile::Cartoon,
        other => return Err(CliError::Invalid(format!("unknown profile {other:?}"))),
    };
    let ns: Vec<usize> = list
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| CliError::Invalid(format!("bad budget {s:?}"))))
        .collect::<Result<_, _>>()?;
    if ns.is_empty() || k_radius < 1 {
        return Err(CliError::Invalid("need at least one budget and k_radius >= 1".into()));
    }
    let cfg = RateConfig {
        approx: ApproxConfig { n0, scheme, envelope },
        length,
        j_cap,
        k_radius,
        ..d
    };
    let mut table = rate_study(profile, &ns, beta, seed, &cfg)?;
    if !ctx.cli.record_timing {
        table.rows.iter_mut().for_each(|r| r.seconds = 0.0);
    }
    print!("{}", table.to_csv());
    match table.slope {
        Some(s) => println!("fitted slope {s:.4}"),
        None => println!("fitted slope unavailable"),
    }
    ctx.write_text("rate.csv", &table.to_csv())?;
    ctx.write_json("rate.json", to_value(&table))
}

fn bessel_audit(ctx: &mut Ctx, a: &AuditArgs) -> Result<(), CliError> {
    let d = AuditConfig::default();
    let j_max = ctx.r.get("j_max", a.j_max, d.j_max)?;
    let j_low = ctx.r.get("j_low", a.j_low, d.j_low)?;
    let samples = ctx.r.get("samples", a.samples, d.sector_samples)?;
    let star_samples = ctx.r.get("star_samples", a.star_samples, d.star_samples)?;
    let row_samples = ctx.r.get("row_samples", a.row_samples, d.row_samples)?;
    let row_j_max = ctx.r.get("row_j_max", a.row_j_max, d.row_j_max)?;
    let row_radius = ctx.r.get("radius", a.radius, d.row_radius)?;
    let eta_j = ctx.r.get("eta_j", a.eta_j, d.eta.j)?;
    let eta_k = ctx.r.get("eta_k", a.eta_k, d.eta.k)?;
    let seed = ctx.r.get("seed", ctx.cli.seed, d.seed)?;
    ctx.r.finish()?;
    if j_low > j_max || j_max > 60 {
        return Err(CliError::Invalid("need j_low <= j_max <= 60".into()));
    }
    let cfg = AuditConfig {
        eta: EtaParams::new(eta_j, eta_k)?,
        j_max,
        j_low,
        star_samples,
        sector_samples: samples,
        rho_samples: samples,
        row_samples,
        row_j_max,
        row_radius,
        seed,
        ..d
    };
    let records = run_audit(&cfg);
    for r in &records {
        println!("{:<24} max {:.6e} bound {:.6e} {}", r.check, r.max_value, r.bound, if r.pass { "pass" } else { "FAIL" });
    }
    let mut summary = BTreeMap::new();
    summary.insert("pass", records.iter().all(|r| r.pass));
    ctx.write_json("bessel_audit.json", json!({"records": to_value(&records), "summary": summary}))
}
