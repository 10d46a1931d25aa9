//! Subcommand bodies.

use std::cell::RefCell;
use std::path::Path;

use anyhow::{bail, Result};
use serde_json::json;
use twdp_core::closed_form::phase_pdf_closed;
use twdp_core::perf::{pe_curve, pe_rician_oracle};
use twdp_core::phase::{phase_grid, phase_pdf_oracle, truncation_bounds_with, PhasePdfSpec, TruncationRule};
use twdp_core::simulate::{
    geo_phase_histogram, geo_realization, mc_phase_samples, GeoSimConfig, Histogram, McConfig, PhaseReference,
};
use twdp_core::specfun::SeriesControl;
use twdp_core::{ChannelParams, Execution};

use crate::args::{
    BoundsArgs, ChannelArgs, Cli, Command, ExportArg, GeosimArgs, McArgs, PdfArgs, PdfMethod, PeArgs,
    PhaseReferenceArg, RuleArg,
};
use crate::output::{num, RunManifest, Sink};

/// Absolute accuracy of the quadrature behind `pdf --method oracle`.
const ORACLE_TOL: f64 = 1e-10;

/// Below this many samples the per-bin noise dwarfs any model error.
const MC_WARN_SAMPLES: u64 = 100_000;

/// Longest list a `min:max:step` range may expand to.
const MAX_RANGE_LEN: usize = 1_000_000;

const HIST_HEADER: [&str; 4] = ["bin_left_rad", "bin_right_rad", "density", "analytic"];

pub fn run(cli: &Cli) -> Result<()> {
    let out = cli.out_dir.as_path();
    match &cli.command {
        Command::Pdf(a) => pdf(a, out),
        Command::Bounds(a) => bounds(a, out),
        Command::Pe(a) => pe(a, out),
        Command::Mc(a) => mc(a, out),
        Command::Geosim(a) => geosim(a, out),
    }
}

impl ChannelArgs {
    fn resolve(&self) -> Result<ChannelParams> {
        if !self.physical {
            return Ok(ChannelParams::from_normalized(self.k, self.gamma, self.omega, self.phi1)?);
        }
        let (Some(v1), Some(v2), Some(sigma2)) = (self.v1, self.v2, self.sigma2) else {
            bail!("--physical needs --V1, --V2 and --sigma2");
        };
        if sigma2 == 0.0 {
            Ok(ChannelParams::without_diffuse(v1, v2, self.phi1)?)
        } else {
            Ok(ChannelParams::new(v1, v2, sigma2, self.phi1)?)
        }
    }
}

fn pdf(a: &PdfArgs, out: &Path) -> Result<()> {
    let params = a.channel.resolve()?;
    if a.grid_points < 2 {
        bail!("--grid-points must be at least 2");
    }
    let grid = phase_grid(a.grid_points);
    let density = match a.method {
        PdfMethod::Series => PhasePdfSpec::new(params, a.alpha_pct)?.density_grid(&grid, Execution::Parallel)?,
        PdfMethod::Closed => {
            let ctl = SeriesControl::default();
            grid.iter()
                .map(|&phi| phase_pdf_closed(&params, phi, &ctl).map(|t| t.total()))
                .collect::<twdp_core::Result<_>>()?
        }
        PdfMethod::Oracle => grid
            .iter()
            .map(|&phi| phase_pdf_oracle(&params, phi, ORACLE_TOL))
            .collect::<twdp_core::Result<_>>()?,
    };
    let sink = Sink::new(out, RunManifest::new("pdf", a, None)?)?;
    let rows = grid.iter().zip(&density).map(|(&phi, &d)| vec![num(phi), num(d)]);
    let path = sink.write_csv(&format!("pdf_{}.csv", a.method.name()), None, &["phi_rad", "density"], rows)?;
    println!("wrote {}", path.display());
    Ok(())
}

/// `min, min+step, …` up to `max` inclusive.
fn inclusive_range(min: f64, max: f64, step: f64, what: &str) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite() && step.is_finite()) || step <= 0.0 || max < min {
        bail!("{what} range needs finite min <= max and step > 0 (got {min}:{max}:{step})");
    }
    let n = ((max - min) / step + 1e-9).floor() as usize + 1;
    if n > MAX_RANGE_LEN {
        bail!("{what} range expands to {n} points (limit {MAX_RANGE_LEN})");
    }
    Ok((0..n).map(|i| min + step * i as f64).collect())
}

fn bounds(a: &BoundsArgs, out: &Path) -> Result<()> {
    let k_range = (a.k_min, a.k_max, a.k_step);
    let nu_range = (a.nu_min, a.nu_max, a.nu_step);
    let g2 = a.gamma * a.gamma;
    // (nu, K) pairs
    let points: Vec<(f64, f64)> = match (k_range, nu_range) {
        ((Some(lo), Some(hi), Some(step)), (None, None, None)) => inclusive_range(lo, hi, step, "K")?
            .into_iter()
            .map(|k| Ok((ChannelParams::from_normalized(k, a.gamma, 1.0, 0.0)?.nu(), k)))
            .collect::<Result<_>>()?,
        ((None, None, None), (Some(lo), Some(hi), Some(step))) => {
            if a.gamma <= 0.0 || a.gamma > 1.0 || a.gamma.is_nan() {
                bail!("a nu range needs 0 < Gamma <= 1, got {}", a.gamma);
            }
            inclusive_range(lo, hi, step, "nu")?
                .into_iter()
                .map(|nu| (nu, nu * (1.0 + g2) / g2))
                .collect()
        }
        _ => bail!("give exactly one complete range: --K-min/--K-max/--K-step or --nu-min/--nu-max/--nu-step"),
    };
    let rule = match a.rule {
        RuleArg::Wald => TruncationRule::Wald,
        RuleArg::Covering => TruncationRule::Covering,
    };
    let mut rows = Vec::with_capacity(points.len());
    for &(nu, k) in &points {
        let b = truncation_bounds_with(nu, a.alpha_pct, rule)?;
        rows.push(vec![
            num(nu),
            num(k),
            num(a.gamma),
            b.m_min.to_string(),
            b.m_max.to_string(),
            b.len().to_string(),
        ]);
    }
    let sink = Sink::new(out, RunManifest::new("bounds", a, None)?)?;
    let path = sink.write_csv("bounds.csv", None, &["nu", "K", "Gamma", "m_min", "m_max", "n_terms"], rows)?;
    println!("wrote {}", path.display());
    Ok(())
}

/// `start:stop:step` or `k1,k2,…`.
fn parse_k_grid(s: &str) -> Result<Vec<f64>> {
    let parse = |t: &str| -> Result<f64> {
        t.trim()
            .parse::<f64>()
            .map_err(|_| anyhow::anyhow!("--K-grid entry `{t}` is not a number"))
    };
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, step] = parts.as_slice() else {
            bail!("--K-grid range must read start:stop:step, got `{s}`");
        };
        inclusive_range(parse(lo)?, parse(hi)?, parse(step)?, "K")
    } else {
        s.split(',').map(parse).collect()
    }
}

fn pe(a: &PeArgs, out: &Path) -> Result<()> {
    let ks = parse_k_grid(&a.k_grid)?;
    if a.m.is_empty() {
        bail!("--M needs at least one modulation order");
    }
    if a.rician_oracle && a.gamma != 0.0 {
        bail!("--rician-oracle applies only to Gamma = 0");
    }
    let sink = Sink::new(out, RunManifest::new("pe", a, None)?)?;
    for &m in &a.m {
        let (name, evaluator, values) = if a.rician_oracle {
            let values = ks
                .iter()
                .map(|&k| pe_rician_oracle(k, m, a.quad_tol))
                .collect::<twdp_core::Result<Vec<_>>>()?;
            (format!("pe_rician_M{m}.csv"), "rician-oracle", values)
        } else {
            let curve = pe_curve(a.gamma, a.omega, m, &ks, a.alpha_pct, a.quad_tol, Execution::Parallel)?;
            (format!("pe_M{m}.csv"), "series", curve.pe_values)
        };
        let header = json!({
            "Gamma": a.gamma,
            "Omega": a.omega,
            "M": m,
            "alpha_pct": a.alpha_pct,
            "quad_tol": a.quad_tol,
            "evaluator": evaluator,
        });
        let rows = ks.iter().zip(&values).map(|(&k, &p)| vec![num(k), num(p)]);
        let path = sink.write_csv(&name, Some(&header.to_string()), &["K", "Pe"], rows)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

/// Bin averages of the series density, or NaN when the channel has no
/// diffuse part and no density exists.
fn analytic_column(h: &Histogram, params: &ChannelParams, alpha_pct: f64) -> Result<Vec<f64>> {
    if !params.has_diffuse() {
        return Ok(vec![f64::NAN; h.n_bins()]);
    }
    let spec = PhasePdfSpec::new(*params, alpha_pct)?;
    let first_err = RefCell::new(None);
    let values = h.bin_averages(|phi| {
        spec.density(phi).unwrap_or_else(|e| {
            first_err.borrow_mut().get_or_insert(e);
            f64::NAN
        })
    });
    if let Some(e) = first_err.into_inner() {
        return Err(e.into());
    }
    Ok(values)
}

fn histogram_rows(h: &Histogram, analytic: &[f64]) -> Vec<Vec<String>> {
    h.densities()
        .iter()
        .enumerate()
        .map(|(i, &d)| vec![num(h.left_edge(i)), num(h.right_edge(i)), num(d), num(analytic[i])])
        .collect()
}

fn mc(a: &McArgs, out: &Path) -> Result<()> {
    let params = a.channel.resolve()?;
    let cfg = McConfig {
        params,
        n_samples: a.n_samples,
        seed: a.seed,
        n_bins: a.n_bins,
    };
    cfg.validate()?;
    if a.n_samples < MC_WARN_SAMPLES {
        eprintln!(
            "warning: n_samples = {} is below {MC_WARN_SAMPLES}; per-bin statistical tolerance is loose",
            a.n_samples
        );
    }
    let res = mc_phase_samples(&cfg, Execution::Parallel)?;
    let h = &res.histogram;
    let analytic = analytic_column(h, &params, a.alpha_pct)?;
    let sink = Sink::new(out, RunManifest::new("mc", a, Some(a.seed))?)?;
    let path = sink.write_csv("mc_histogram.csv", None, &HIST_HEADER, histogram_rows(h, &analytic))?;
    println!("wrote {}", path.display());
    if params.has_diffuse() {
        // one binomial standard deviation of the density in the fullest bin
        let n = h.total() as f64;
        let sigma = analytic
            .iter()
            .map(|&f| {
                let p = (f * h.width()).clamp(0.0, 1.0);
                (p * (1.0 - p) / n).sqrt() / h.width()
            })
            .fold(0.0, f64::max);
        println!(
            "max |density - analytic| = {:e} (largest per-bin sigma {sigma:e})",
            h.max_abs_deviation(&analytic)
        );
    }
    Ok(())
}

fn geosim(a: &GeosimArgs, out: &Path) -> Result<()> {
    let params = a.channel.resolve()?;
    let point = |v: &[f64], flag: &str| -> Result<[f64; 2]> {
        match v {
            [x, y] => Ok([*x, *y]),
            _ => bail!("--{flag} takes two comma-separated coordinates"),
        }
    };
    let cfg = GeoSimConfig {
        tx_position: point(&a.tx_position, "tx-position")?,
        reflector_position: point(&a.reflector_position, "reflector-position")?,
        reflector_angle_deg: a.reflector_angle_deg,
        rx_velocity: a.rx_velocity,
        doppler_max_hz: a.doppler_max_hz,
        sample_time_s: a.sample_time_s,
        duration_s: a.duration_s,
        n_realizations: a.n_realizations,
        n_scatter_sinusoids: a.n_scatter_sinusoids,
        params,
        seed: a.seed,
        n_bins: a.n_bins,
        phase_reference: match a.phase_reference {
            PhaseReferenceArg::Fixed => PhaseReference::Fixed,
            PhaseReferenceArg::TrackLos => PhaseReference::TrackLos,
        },
    };
    cfg.validate()?;
    let rot = cfg.specular_rotation()?;
    println!(
        "LoS phase rotation {:.3} deg, reflected phase rotation {:.3} turns",
        rot.los_degrees, rot.reflected_turns
    );
    let sink = Sink::new(out, RunManifest::new("geosim", a, Some(a.seed))?)?;
    if matches!(a.export, ExportArg::Realizations | ExportArg::Both) {
        for i in 0..cfg.n_realizations {
            let r = geo_realization(&cfg, i)?;
            let rows = r
                .times()
                .zip(&r.samples)
                .map(|(t, s)| vec![num(t), num(s.re), num(s.im), num(s.norm()), num(s.arg())]);
            sink.write_csv(
                &format!("geosim_realization_{i:04}.csv"),
                None,
                &["t_s", "re", "im", "envelope", "phase_rad"],
                rows,
            )?;
        }
        println!("wrote {} realization files", cfg.n_realizations);
    }
    if matches!(a.export, ExportArg::Histogram | ExportArg::Both) {
        let h = geo_phase_histogram(&cfg, Execution::Parallel)?;
        let analytic = analytic_column(&h, &params, a.alpha_pct)?;
        let path = sink.write_csv("geosim_histogram.csv", None, &HIST_HEADER, histogram_rows(&h, &analytic))?;
        println!("wrote {}", path.display());
        if params.has_diffuse() {
            println!("max |density - analytic| = {:e}", h.max_abs_deviation(&analytic));
        }
    }
    Ok(())
}
