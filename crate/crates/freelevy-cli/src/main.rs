//! Command-line front end for the freelevy library.
//!
//! CSV column contracts:
//! - `density`: `x,f` (density grid)
//! - `cumulant` / `integrate`: `re_z,im_z,re_C,im_C`
//! - `rmt` eigenvalue dumps: header comment `# model=… n=… seed=…`,
//!   then `value`, one eigenvalue per line
//!
//! All numeric output uses the period as decimal separator and `\n` line
//! endings regardless of locale. Exit codes: 0 success, 1 configuration
//! error, 2 math/domain rejection (non-selfdecomposable input, infinite
//! log-moment, bad parameters), 3 convergence failure; `verify` exits 3
//! when a criterion fails. Errors are mirrored as JSON on stderr.
//!
//! `FREELEVY_THREADS` caps the worker-thread count.

use clap::{Args, Parser, Subcommand};
use freelevy::calculus;
use freelevy::catalog;
use freelevy::error::Error;
use freelevy::jet::C64;
use freelevy::measures::{triplet_from_json, triplet_to_json};
use freelevy::processes::{
    bdlp, bdlp_levy_density, levy_integral_cumulant, sd_test, stochastic_integral_law,
    IntegrandFamily, Integrator, RefinementConfig, SdDiagnostic, SdMethod, SdVerdict,
    SelfSimilarProcess,
};
use freelevy::rmt::{ks_distance, sample_spectrum, spectrum_csv, Ensemble};
use freelevy::transforms::{
    default_cminus_grid, density_grid_cfg, eval_cumulant, DensityGrid, DistributionSpec,
    StieltjesConfig,
};
use freelevy::verify;
use serde_json::json;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "freelevy",
    version,
    about = "Numerics for freely infinitely divisible distributions",
    after_help = "CSV contracts: density -> x,f | cumulant -> re_z,im_z,re_C,im_C | \
                  eigenvalues -> value. Exit codes: 1 config, 2 math/domain, 3 convergence."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// How a distribution is specified on the command line.
#[derive(Args, Clone, Debug, Default)]
struct SpecArgs {
    /// Catalog law (semicircle, free_gamma, mu_p, fuss_catalan, free_poisson, dirac)
    #[arg(long)]
    catalog: Option<String>,
    /// Catalog parameters, e.g. t=1,c=1
    #[arg(long, default_value = "")]
    params: String,
    /// Inline triplet JSON {"a":…,"eta":…,"nu":{…}}
    #[arg(long)]
    triplet: Option<String>,
    /// Path to a JSON file holding {"catalog":…,"params":{…}} or {"triplet":{…}}
    #[arg(long)]
    spec_file: Option<PathBuf>,
}

fn parse_params(s: &str) -> Result<BTreeMap<String, f64>, Error> {
    let mut out = BTreeMap::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::BadInput(format!("parameter `{part}` is not key=value")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::BadInput(format!("parameter `{part}` has a non-numeric value")))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

impl SpecArgs {
    fn load(&self) -> Result<DistributionSpec, Error> {
        let sources = [
            self.catalog.is_some(),
            self.triplet.is_some(),
            self.spec_file.is_some(),
        ];
        if sources.iter().filter(|b| **b).count() != 1 {
            return Err(Error::BadInput(
                "exactly one of --catalog, --triplet, --spec-file is required".into(),
            ));
        }
        if let Some(name) = &self.catalog {
            let params = parse_params(&self.params)?;
            return Ok(catalog::catalog_get(name, &params)?.spec);
        }
        if let Some(json) = &self.triplet {
            let t = triplet_from_json(json)?;
            return Ok(DistributionSpec::from_triplet("triplet", t));
        }
        let path = self.spec_file.as_ref().unwrap();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::BadInput(format!("cannot read {}: {e}", path.display())))?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| Error::BadInput(format!("bad spec JSON: {e}")))?;
        if let Some(name) = value.get("catalog").and_then(|v| v.as_str()) {
            let mut params = BTreeMap::new();
            if let Some(obj) = value.get("params").and_then(|v| v.as_object()) {
                for (k, v) in obj {
                    params.insert(
                        k.clone(),
                        v.as_f64().ok_or_else(|| {
                            Error::BadInput(format!("parameter {k} is not a number"))
                        })?,
                    );
                }
            }
            return Ok(catalog::catalog_get(name, &params)?.spec);
        }
        if let Some(t) = value.get("triplet") {
            let t = triplet_from_json(&t.to_string())?;
            return Ok(DistributionSpec::from_triplet("triplet", t));
        }
        Err(Error::BadInput(
            "spec file needs a `catalog` or `triplet` key".into(),
        ))
    }

    fn entry(&self) -> Result<Option<catalog::CatalogEntry>, Error> {
        if let Some(name) = &self.catalog {
            let params = parse_params(&self.params)?;
            return Ok(Some(catalog::catalog_get(name, &params)?));
        }
        Ok(None)
    }
}

/// "lo:hi" range.
fn parse_range(s: &str) -> Result<(f64, f64), Error> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| Error::BadInput(format!("range `{s}` must be lo:hi")))?;
    let lo: f64 = a
        .parse()
        .map_err(|_| Error::BadInput(format!("bad range bound `{a}`")))?;
    let hi: f64 = b
        .parse()
        .map_err(|_| Error::BadInput(format!("bad range bound `{b}`")))?;
    Ok((lo, hi))
}

/// "lo:hi:n" axis.
fn parse_axis(s: &str) -> Result<(f64, f64, usize), Error> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::BadInput(format!("axis `{s}` must be lo:hi:n")));
    }
    let lo = parts[0]
        .parse()
        .map_err(|_| Error::BadInput(format!("bad axis `{s}`")))?;
    let hi = parts[1]
        .parse()
        .map_err(|_| Error::BadInput(format!("bad axis `{s}`")))?;
    let n = parts[2]
        .parse()
        .map_err(|_| Error::BadInput(format!("bad axis `{s}`")))?;
    Ok((lo, hi, n))
}

fn parse_ladder(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| Error::BadInput(format!("bad ladder `{s}`")))
        })
        .collect()
}

#[derive(Subcommand)]
enum Cmd {
    /// Tabulate a density by Stieltjes inversion
    Density {
        #[command(flatten)]
        spec: SpecArgs,
        /// Window lo:hi
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        /// Number of grid points
        #[arg(long, default_value_t = 601)]
        n: usize,
        /// ε-ladder for the inversion (comma separated, halving)
        #[arg(long, default_value = "1e-2,5e-3,2.5e-3")]
        eps_ladder: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Evaluate the free cumulant transform on a lower-half-plane grid
    Cumulant {
        #[command(flatten)]
        spec: SpecArgs,
        /// Real axis lo:hi:n (default: the built-in 25-point grid)
        #[arg(long, allow_hyphen_values = true)]
        re: Option<String>,
        /// Imaginary axis lo:hi:n with hi < 0
        #[arg(long, allow_hyphen_values = true)]
        im: Option<String>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Free additive convolution of two laws
    Convolve {
        #[arg(long)]
        catalog_a: Option<String>,
        #[arg(long, default_value = "")]
        params_a: String,
        #[arg(long)]
        triplet_a: Option<String>,
        #[arg(long)]
        spec_file_a: Option<PathBuf>,
        #[arg(long)]
        catalog_b: Option<String>,
        #[arg(long, default_value = "")]
        params_b: String,
        #[arg(long)]
        triplet_b: Option<String>,
        #[arg(long)]
        spec_file_b: Option<PathBuf>,
        /// Also tabulate the density of the convolution over this window
        #[arg(long)]
        emit_density: Option<PathBuf>,
        #[arg(long, default_value = "-4:4", allow_hyphen_values = true)]
        range: String,
        #[arg(long, default_value_t = 601)]
        n: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Dilation D_c of a law
    Dilate {
        #[command(flatten)]
        spec: SpecArgs,
        /// Dilation factor (nonzero)
        #[arg(long, allow_hyphen_values = true)]
        by: f64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Bercovici-Pata bijection on a triplet (the triplet data is shared;
    /// the direction relabels which calculus interprets it)
    Bp {
        #[command(flatten)]
        spec: SpecArgs,
        /// Map free → classical instead
        #[arg(long)]
        inverse: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Free selfdecomposability test
    SdTest {
        #[command(flatten)]
        spec: SpecArgs,
        /// auto | monotonicity | halfplane
        #[arg(long, default_value = "auto")]
        method: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Background driving free Lévy process of a selfdecomposable law
    Bdlp {
        #[command(flatten)]
        spec: SpecArgs,
        /// Write the BDLP Lévy density (CSV x,density) here
        #[arg(long)]
        emit_levy: Option<PathBuf>,
        /// Points per support piece in the Lévy density dump
        #[arg(long, default_value_t = 257)]
        levy_points: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Marginal law X_t of the H-selfsimilar process over a base law
    Marginal {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        h: f64,
        #[arg(long)]
        t: f64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Increment law X_t - X_s of the H-selfsimilar process
    Increment {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        h: f64,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        t: f64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Stochastic integral ∫ f dX (Riemann refinement) or ∫ f dZ (Lévy)
    Integrate {
        #[command(flatten)]
        spec: SpecArgs,
        /// selfsimilar (Riemann sums over the H-selfsimilar process) or
        /// levy (quadrature against the BDLP of the base law)
        #[arg(long, default_value = "selfsimilar")]
        integrator: String,
        /// Selfsimilarity index H
        #[arg(long, default_value_t = 1.0)]
        h: f64,
        /// Integrand family: const | power | exp
        #[arg(long)]
        f: String,
        /// Parameter of the family: the constant value, the exponent of t^θ,
        /// or the rate of e^{θt}
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long)]
        from: f64,
        /// Upper limit (inf allowed for the levy integrator)
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Sample matrix spectra and compare against a catalog law
    Rmt {
        /// gaussian_hermitian | wishart | free_sum
        #[arg(long)]
        model: String,
        /// Aspect ratio for wishart
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        /// Comma-separated seeds
        #[arg(long, default_value = "1,2,3,4,5,6,7,8,9,10")]
        seeds: String,
        /// Directory for per-seed eigenvalue CSVs (omit to skip dumps)
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Catalog law to compare against (defaults to the matched limit)
        #[arg(long)]
        law: Option<String>,
        #[arg(long, default_value = "")]
        law_params: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run the verification suite and print a pass/fail table
    Verify {
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn write_out(path: Option<&PathBuf>, content: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| Error::BadInput(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{content}");
            std::io::stdout().flush().ok();
            Ok(())
        }
    }
}

fn spec_json(spec: &DistributionSpec) -> serde_json::Value {
    let mut obj = json!({
        "label": spec.label(),
        "cumulant": spec.expr().to_string(),
    });
    if let Some(t) = spec.triplet() {
        obj["triplet"] = serde_json::to_value(triplet_to_json(t, 257)).unwrap();
    }
    obj
}

fn density_csv(grid: &DensityGrid) -> String {
    let mut out = String::from("x,f\n");
    for (x, f) in &grid.points {
        out.push_str(&format!("{x},{f}\n"));
    }
    for x in &grid.gaps {
        out.push_str(&format!("# gap at x={x}\n"));
    }
    out.push_str(&format!("# trapezoid mass = {}\n", grid.mass));
    out
}

fn cumulant_csv(rows: &[(C64, C64)]) -> String {
    let mut out = String::from("re_z,im_z,re_C,im_C\n");
    for (z, c) in rows {
        out.push_str(&format!("{},{},{},{}\n", z.re, z.im, c.re, c.im));
    }
    out
}

fn verdict_json(v: &SdVerdict) -> serde_json::Value {
    let violations: Vec<serde_json::Value> = v
        .diagnostics
        .iter()
        .filter_map(|d| match d {
            SdDiagnostic::Monotonicity {
                x_prev,
                x,
                k_prev,
                k,
                ok,
            } if !ok => Some(json!({
                "kind": "monotonicity", "x_prev": x_prev, "x": x, "k_prev": k_prev, "k": k
            })),
            SdDiagnostic::Halfplane { u, im_dc, ok } if !ok => Some(json!({
                "kind": "halfplane", "re_u": u.re, "im_u": u.im, "im_dc": im_dc
            })),
            _ => None,
        })
        .collect();
    json!({
        "is_sd": v.is_sd,
        "method": v.method,
        "reason": v.reason,
        "points_tested": v.diagnostics.len(),
        "violations": violations,
    })
}

fn grid_for(entry: &catalog::CatalogEntry) -> Result<DensityGrid, Error> {
    let d = entry
        .closed_density
        .as_ref()
        .ok_or_else(|| Error::UnsupportedRepresentation {
            op: "rmt",
            detail: format!(
                "law `{}` has no closed density to compare against",
                entry.name
            ),
        })?;
    let (lo, hi) = d.support;
    let f = d.f.clone();
    let support = d.support;
    Ok(DensityGrid::from_closed_density(
        move |x| {
            if x <= support.0 || x >= support.1 {
                0.0
            } else {
                f(x).max(0.0)
            }
        },
        lo - 0.5,
        hi + 0.5,
        4001,
    ))
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.cmd {
        Cmd::Density {
            spec,
            range,
            n,
            eps_ladder,
            output,
        } => {
            let d = spec.load()?;
            let (lo, hi) = parse_range(&range)?;
            let cfg = StieltjesConfig {
                ladder: parse_ladder(&eps_ladder)?,
                ..Default::default()
            };
            let grid = density_grid_cfg(&d, lo, hi, n, &cfg)?;
            write_out(output.as_ref(), &density_csv(&grid))
        }
        Cmd::Cumulant {
            spec,
            re,
            im,
            output,
        } => {
            let d = spec.load()?;
            let zs: Vec<C64> = match (re, im) {
                (None, None) => default_cminus_grid(),
                (Some(re), Some(im)) => {
                    let (rlo, rhi, rn) = parse_axis(&re)?;
                    let (ilo, ihi, in_) = parse_axis(&im)?;
                    if ihi > 0.0 {
                        return Err(Error::BadInput(
                            "imaginary axis must stay in the lower half-plane".into(),
                        ));
                    }
                    let mut zs = Vec::new();
                    for i in 0..rn {
                        let x = rlo + (rhi - rlo) * i as f64 / (rn.max(2) - 1) as f64;
                        for j in 0..in_ {
                            let y = ilo + (ihi - ilo) * j as f64 / (in_.max(2) - 1) as f64;
                            zs.push(C64::new(x, y));
                        }
                    }
                    zs
                }
                _ => {
                    return Err(Error::BadInput(
                        "--re and --im must be given together".into(),
                    ))
                }
            };
            let rows: Vec<(C64, C64)> = zs
                .into_iter()
                .map(|z| eval_cumulant(&d, z).map(|c| (z, c)))
                .collect::<Result<_, _>>()?;
            write_out(output.as_ref(), &cumulant_csv(&rows))
        }
        Cmd::Convolve {
            catalog_a,
            params_a,
            triplet_a,
            spec_file_a,
            catalog_b,
            params_b,
            triplet_b,
            spec_file_b,
            emit_density,
            range,
            n,
            output,
        } => {
            let a = SpecArgs {
                catalog: catalog_a,
                params: params_a,
                triplet: triplet_a,
                spec_file: spec_file_a,
            }
            .load()?;
            let b = SpecArgs {
                catalog: catalog_b,
                params: params_b,
                triplet: triplet_b,
                spec_file: spec_file_b,
            }
            .load()?;
            let c = calculus::boxplus(&a, &b);
            if let Some(path) = emit_density {
                let (lo, hi) = parse_range(&range)?;
                let grid = density_grid_cfg(&c, lo, hi, n, &StieltjesConfig::default())?;
                write_out(Some(&path), &density_csv(&grid))?;
            }
            write_out(output.as_ref(), &format!("{}\n", spec_json(&c)))
        }
        Cmd::Dilate { spec, by, output } => {
            let d = calculus::dilate(&spec.load()?, by)?;
            write_out(output.as_ref(), &format!("{}\n", spec_json(&d)))
        }
        Cmd::Bp {
            spec,
            inverse,
            output,
        } => {
            let d = spec.load()?;
            let t = d
                .triplet()
                .ok_or_else(|| Error::UnsupportedRepresentation {
                    op: "bp",
                    detail: "the bijection acts on triplet data; supply one".into(),
                })?;
            let direction = if inverse {
                "free_to_classical"
            } else {
                "classical_to_free"
            };
            let payload = json!({
                "direction": direction,
                "triplet": triplet_to_json(t, 257),
            });
            write_out(output.as_ref(), &format!("{payload}\n"))
        }
        Cmd::SdTest {
            spec,
            method,
            output,
        } => {
            let d = spec.load()?;
            let m = match method.as_str() {
                "auto" => SdMethod::Auto,
                "monotonicity" => SdMethod::LevyDensityMonotonicity,
                "halfplane" => SdMethod::AnalyticHalfplane,
                other => return Err(Error::BadInput(format!("unknown sd-test method `{other}`"))),
            };
            let verdict = sd_test(&d, m)?;
            write_out(output.as_ref(), &format!("{}\n", verdict_json(&verdict)))
        }
        Cmd::Bdlp {
            spec,
            emit_levy,
            levy_points,
            output,
        } => {
            let d = spec.load()?;
            let entry = spec.entry()?;
            let lp = bdlp(&d)?;
            if let Some(path) = emit_levy {
                // closed-form BDLP Levy measure when the catalog carries
                // one, the -k' differentiation route otherwise
                let closed = entry.as_ref().and_then(|e| e.bdlp_levy.clone());
                let nu = match closed {
                    Some(nu) => nu,
                    None => bdlp_levy_density(&d)?,
                };
                let mut csv = String::from("x,density\n");
                for piece in nu.pieces() {
                    let (lo, hi) = (piece.lo(), piece.hi());
                    let inset = (hi - lo) * 1e-4;
                    for i in 0..levy_points {
                        let x = lo
                            + inset
                            + (hi - lo - 2.0 * inset) * i as f64 / (levy_points - 1) as f64;
                        csv.push_str(&format!("{x},{}\n", piece.eval(x)));
                    }
                }
                write_out(Some(&path), &csv)?;
            }
            write_out(
                output.as_ref(),
                &format!("{}\n", spec_json(&lp.one_dim_marginal)),
            )
        }
        Cmd::Marginal { spec, h, t, output } => {
            let base = spec.load()?;
            let p = SelfSimilarProcess::new(base, h)?;
            let m = p.marginal(t)?;
            write_out(output.as_ref(), &format!("{}\n", spec_json(&m)))
        }
        Cmd::Increment {
            spec,
            h,
            s,
            t,
            output,
        } => {
            let base = spec.load()?;
            let p = SelfSimilarProcess::new(base, h)?;
            let m = p.increment(s, t)?;
            write_out(output.as_ref(), &format!("{}\n", spec_json(&m)))
        }
        Cmd::Integrate {
            spec,
            integrator,
            h,
            f,
            theta,
            from,
            to,
            tol,
            output,
        } => {
            let base = spec.load()?;
            let family = match f.as_str() {
                "const" => IntegrandFamily::Const(theta),
                "power" => IntegrandFamily::Power { theta },
                "exp" => IntegrandFamily::Exp { theta },
                other => {
                    return Err(Error::BadInput(format!(
                        "unknown integrand family `{other}` (const|power|exp)"
                    )))
                }
            };
            match integrator.as_str() {
                "selfsimilar" => {
                    let p = SelfSimilarProcess::new(base, h)?;
                    let law = stochastic_integral_law(
                        &Integrator::SelfSimilar(&p),
                        family,
                        from,
                        to,
                        &RefinementConfig { tol, max_depth: 20 },
                    )?;
                    let rows: Vec<(C64, C64)> = default_cminus_grid()
                        .into_iter()
                        .map(|z| eval_cumulant(&law, z).map(|c| (z, c)))
                        .collect::<Result<_, _>>()?;
                    let mut out = cumulant_csv(&rows);
                    out.push_str(&format!("# law = {}\n", law.expr()));
                    write_out(output.as_ref(), &out)
                }
                "levy" => {
                    let lp = bdlp(&base)?.time_scaled(h);
                    let rows: Vec<(C64, C64)> = default_cminus_grid()
                        .into_iter()
                        .map(|z| {
                            levy_integral_cumulant(&lp, family, from, to, z, tol).map(|c| (z, c))
                        })
                        .collect::<Result<_, _>>()?;
                    write_out(output.as_ref(), &cumulant_csv(&rows))
                }
                other => Err(Error::BadInput(format!(
                    "unknown integrator `{other}` (selfsimilar|levy)"
                ))),
            }
        }
        Cmd::Rmt {
            model,
            lambda,
            n,
            seeds,
            out_dir,
            law,
            law_params,
            output,
        } => {
            let ensemble = match model.as_str() {
                "gaussian_hermitian" => Ensemble::GaussianHermitian,
                "wishart" => Ensemble::Wishart { lambda },
                "free_sum" => Ensemble::FreeSum(
                    Box::new(Ensemble::GaussianHermitian),
                    Box::new(Ensemble::GaussianHermitian),
                ),
                other => return Err(Error::BadInput(format!("unknown model `{other}`"))),
            };
            let (law_name, law_params) = match law {
                Some(name) => (name, parse_params(&law_params)?),
                None => match model.as_str() {
                    "gaussian_hermitian" => ("semicircle".to_string(), BTreeMap::new()),
                    "wishart" => (
                        "free_poisson".to_string(),
                        [("lambda".to_string(), lambda)].into_iter().collect(),
                    ),
                    _ => (
                        "semicircle".to_string(),
                        [("a".to_string(), 2.0)].into_iter().collect(),
                    ),
                },
            };
            let entry = catalog::catalog_get(&law_name, &law_params)?;
            let grid = grid_for(&entry)?;
            let seeds: Vec<u64> = seeds
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| Error::BadInput(format!("bad seed `{s}`")))
                })
                .collect::<Result<_, _>>()?;
            let mut per_seed = Vec::new();
            let mut ks_values = Vec::new();
            for &seed in &seeds {
                let sample = sample_spectrum(&ensemble, n, seed)?;
                if let Some(dir) = &out_dir {
                    std::fs::create_dir_all(dir)
                        .map_err(|e| Error::BadInput(format!("cannot create out dir: {e}")))?;
                    let path = dir.join(format!("{model}_n{n}_seed{seed}.csv"));
                    std::fs::write(&path, spectrum_csv(&sample))
                        .map_err(|e| Error::BadInput(format!("cannot write CSV: {e}")))?;
                }
                let ks = ks_distance(&sample, &grid)?;
                ks_values.push(ks);
                per_seed.push(json!({"seed": seed, "ks": ks}));
            }
            ks_values.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let median = if ks_values.is_empty() {
                f64::NAN
            } else if ks_values.len() % 2 == 1 {
                ks_values[ks_values.len() / 2]
            } else {
                0.5 * (ks_values[ks_values.len() / 2 - 1] + ks_values[ks_values.len() / 2])
            };
            let report = json!({
                "model": model,
                "n": n,
                "law": entry.spec.label(),
                "per_seed": per_seed,
                "median_ks": median,
            });
            write_out(output.as_ref(), &format!("{report}\n"))
        }
        Cmd::Verify { output } => {
            let results = verify::run_all();
            let table = verify::format_table(&results);
            write_out(output.as_ref(), &table)?;
            if results.iter().any(|r| !r.passed) {
                // accuracy criteria missed their pinned tolerances
                std::process::exit(3);
            }
            Ok(())
        }
    }
}

fn main() {
    if let Ok(threads) = std::env::var("FREELEVY_THREADS") {
        if let Ok(k) = threads.parse::<usize>() {
            rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build_global()
                .ok();
        }
    }
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        let code = e.exit_code();
        eprintln!("{}", json!({"error": e.to_string(), "exit_code": code }));
        std::process::exit(code);
    }
}
