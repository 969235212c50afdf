use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use num_traits::{Num, Zero};
use serde_json::{json, Value};
use w3_algebra::{CartanVector, Couplings, GammaRational};
use w3_forms::{l_form, miura_w_form, Chi, Partition, Weight, WeightTag};
use w3_freefield::{doubled_insertions, insertion_data, CorrelatorConfig, FreeFieldError};
use w3_gmc::{
    estimate_correlator, fusion_probe, EstimateOptions, FusionPair, Mollifier, PairKind, Window,
};
use w3_hypnum::{HypParams, SeriesSolution};
use w3_singular::{build_singular, eom_rhs, level_one_symbolic_residual, verify_null_form, MuData};
use w3_ward::{bpz_spec, global_ward_system, global_ward_system_at, BpzMu, BpzWeights, Family};

use crate::cli::{Cli, Command};
use crate::report::{config_hash, CheckResult, RunReport};
use crate::suite::{integral_rows, run_suite, validate_skips, SuiteOptions, INTEGRAL_GAMMAS};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("{0}")]
    Config(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

/// What a command produces: a report, and possibly a CSV table that takes
/// over stdout (the report then goes to stderr as text).
pub struct Output {
    pub report: RunReport,
    pub csv: Option<String>,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

fn load_config(cli: &Cli) -> Result<(CorrelatorConfig, String), CliError> {
    let path =
        cli.common.config.as_ref().ok_or_else(|| {
            CliError::Usage(format!("{} needs --config PATH", cli.command.name()))
        })?;
    let text = read(path)?;
    let cfg = CorrelatorConfig::from_json(&text).map_err(|e| match e {
        FreeFieldError::Config { pointer, message } => CliError::Config(format!(
            "schema error in {} at {pointer}: {message}",
            path.display()
        )),
        other => config_err(other),
    })?;
    Ok((cfg, text))
}

/// `[c1, c2]` JSON or a bare `c1,c2` list of rationals.
pub fn parse_vector(s: &str) -> Result<CartanVector, CliError> {
    let t = s.trim();
    if t.starts_with('[') {
        let [a, b]: [GammaRational; 2] = serde_json::from_str(t)
            .map_err(|e| CliError::Usage(format!("bad vector {s:?}: {e}")))?;
        return Ok(CartanVector::new(a, b));
    }
    let parts: Vec<&str> = t.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Usage(format!(
            "vector {s:?} needs two components"
        )));
    }
    let c = |p: &str| {
        GammaRational::from_str_radix(p.trim(), 10)
            .map_err(|e| CliError::Usage(format!("bad component {p:?}: {e}")))
    };
    Ok(CartanVector::new(c(parts[0])?, c(parts[1])?))
}

fn parse_chi(s: &str) -> Result<Chi, CliError> {
    Chi::from_str(s).map_err(CliError::Usage)
}

fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("grid {s:?} must be start:stop:step with step > 0"));
    let p: Vec<f64> = s
        .split(':')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let [a, b, h] = p[..] else { return Err(bad()) };
    if !(h > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    let n = ((b - a) / h + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| a + k as f64 * h).collect())
}

fn hash_inputs(cli: &Cli, files: &[&str]) -> String {
    let args = serde_json::to_string(&json!({"common": cli.common, "command": cli.command}))
        .expect("plain data");
    let mut parts: Vec<&[u8]> = vec![args.as_bytes()];
    parts.extend(files.iter().map(|f| f.as_bytes()));
    config_hash(&parts)
}

fn report(cli: &Cli, files: &[&str], checks: Vec<CheckResult>, result: Option<Value>) -> Output {
    Output {
        report: RunReport::new(cli.command.name(), hash_inputs(cli, files), checks, result),
        csv: None,
    }
}

pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Forms { lambda, w, alpha } => forms(cli, lambda.as_deref(), *w, alpha),
        Command::VerifySingular {
            level,
            chi,
            index,
            kappa,
        } => verify_singular(cli, *level, chi.as_deref(), *index, kappa.as_deref()),
        Command::Eom { level, insertion } => eom(cli, *level, *insertion),
        Command::Ward => ward(cli),
        Command::Bpz {
            family,
            weights,
            chi,
        } => bpz(cli, family, weights, chi),
        Command::Hyp { spec, grid } => hyp(cli, spec, grid),
        Command::GammaIntegrals => gamma_integrals(cli),
        Command::Gmc {
            mollifier,
            spacing,
            ladder,
            pair,
        } => gmc(cli, mollifier, *spacing, ladder.as_deref(), pair.as_deref()),
        Command::Suite { skip } => suite(cli, skip),
    }
}

fn forms(cli: &Cli, lambda: Option<&str>, w: Option<i64>, alpha: &str) -> Result<Output, CliError> {
    let alpha = parse_vector(alpha)?;
    let (label, form) = match (lambda, w) {
        (Some(l), None) => {
            let p = Partition::from_str(l).map_err(|e| CliError::Usage(e.to_string()))?;
            (format!("L{p:?}"), l_form(p, &alpha))
        }
        (None, Some(n)) => (
            format!("W_-{n}"),
            miura_w_form(n, &alpha).map_err(config_err)?,
        ),
        _ => {
            return Err(CliError::Usage(
                "forms needs exactly one of --lambda or --w".into(),
            ))
        }
    };
    let result = json!({ "descendant": label, "alpha": alpha, "form": form });
    Ok(report(cli, &[], vec![], Some(result)))
}

fn verify_singular(
    cli: &Cli,
    level: u8,
    chi: Option<&str>,
    index: u8,
    kappa: Option<&str>,
) -> Result<Output, CliError> {
    let (residual, coefficients, weight) = match (level, kappa) {
        (1, None) => {
            let r = level_one_symbolic_residual(index).map_err(config_err)?;
            (
                r.to_string(),
                Value::Null,
                json!({ "index": index, "kappa": "symbolic" }),
            )
        }
        _ => {
            let w = if level == 1 {
                let k = kappa.unwrap_or_default();
                let k = GammaRational::from_str_radix(k, 10)
                    .map_err(|e| CliError::Usage(format!("bad --kappa {k:?}: {e}")))?;
                Weight::semi_degenerate(index, k).map_err(config_err)?
            } else {
                let chi =
                    chi.ok_or_else(|| CliError::Usage(format!("level {level} needs --chi")))?;
                Weight::fully_degenerate(parse_chi(chi)?)
            };
            let spec = build_singular(level, &w).map_err(config_err)?;
            let r = verify_null_form(&spec).map_err(config_err)?;
            (
                r.to_string(),
                serde_json::to_value(&spec.coefficients).expect("plain data"),
                json!(w),
            )
        }
    };
    let zero = residual == "0";
    let check = CheckResult::new(
        format!("null_form_level_{level}"),
        zero,
        format!("residual {residual}"),
        json!({ "residual": residual }),
    );
    let result = json!({
        "level": level,
        "weight": weight,
        "residual_zero": zero,
        "residual": residual,
        "coefficients": coefficients,
    });
    Ok(report(cli, &[], vec![check], Some(result)))
}

fn eom(cli: &Cli, level: u8, insertion: Option<usize>) -> Result<Output, CliError> {
    let (cfg, text) = load_config(cli)?;
    let matches = |w: &Weight| {
        matches!(
            (&w.tag, level),
            (WeightTag::SemiDegenerate { .. }, 1) | (WeightTag::FullyDegenerate { .. }, 2 | 3)
        )
    };
    let l = match insertion {
        Some(l) if l < cfg.boundary.len() => l,
        Some(l) => return Err(CliError::Config(format!("no boundary insertion {l}"))),
        None => cfg
            .boundary
            .iter()
            .position(|b| matches(&b.beta))
            .ok_or_else(|| {
                CliError::Config(format!(
                    "no boundary insertion carries a level-{level} degenerate tag"
                ))
            })?,
    };
    let mu = MuData::at_boundary(&cfg, l);
    let rhs = eom_rhs(level, &cfg.boundary[l].beta, &mu).map_err(config_err)?;
    let result = json!({ "insertion": l, "mu": mu, "rhs": rhs });
    Ok(report(cli, &[&text], vec![], Some(result)))
}

fn ward(cli: &Cli) -> Result<Output, CliError> {
    let (cfg, text) = load_config(cli)?;
    let sys = global_ward_system(&cfg).map_err(config_err)?;
    let check = if cfg.neutral() {
        let g = cfg.gamma.clone();
        let entries = doubled_insertions(&cfg);
        let c = Couplings::from_gamma(g.clone());
        let data: Vec<_> = (0..entries.len())
            .map(|k| insertion_data(&entries, k, &c, &g))
            .collect::<Result<_, _>>()
            .map_err(config_err)?;
        let res = global_ward_system_at(&cfg)
            .map_err(config_err)?
            .residuals(&data);
        let nonzero = res.iter().filter(|r| !r.is_zero()).count();
        CheckResult::new(
            "free_field_rows",
            nonzero == 0,
            format!("{} rows at mu=0, {nonzero} nonzero", res.len()),
            json!({ "rows": res.len(), "nonzero": nonzero }),
        )
    } else {
        CheckResult::skipped("free_field_rows", "configuration is not neutral")
    };
    Ok(report(
        cli,
        &[&text],
        vec![check],
        Some(json!({ "system": sys.to_json() })),
    ))
}

fn bpz(cli: &Cli, family: &str, weights: &Path, chi: &str) -> Result<Output, CliError> {
    let family = Family::from_str(family).map_err(CliError::Usage)?;
    let chi = parse_chi(chi)?;
    let text = read(weights)?;
    let w: BpzWeights = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("schema error in {}: {e}", weights.display())))?;
    let gamma = cli.common.gamma.unwrap_or(0.5);
    let spec = bpz_spec(family, &w, chi, &BpzMu::vanishing(gamma)).map_err(config_err)?;
    let check = CheckResult::new(
        "indicial_exponents",
        spec.indicial_matches(),
        format!(
            "B1 = {}, roots at 0 are {{0, 1-B1, 1-B2}}: {}",
            spec.b[0],
            spec.indicial_matches()
        ),
        json!({ "b": spec.b }),
    );
    Ok(report(
        cli,
        &[&text],
        vec![check],
        Some(json!({ "spec": spec })),
    ))
}

fn hyp_params(v: &Value, gamma: Option<f64>) -> Result<HypParams, CliError> {
    if let Ok(p) = serde_json::from_value::<HypParams>(v.clone()) {
        return Ok(p);
    }
    let a: [GammaRational; 3] = serde_json::from_value(v["a"].clone())
        .map_err(|e| CliError::Config(format!("schema error at /a: {e}")))?;
    let b: [GammaRational; 2] = serde_json::from_value(v["b"].clone())
        .map_err(|e| CliError::Config(format!("schema error at /b: {e}")))?;
    let g = gamma.ok_or_else(|| CliError::Usage("symbolic spec needs --gamma".into()))?;
    Ok(HypParams {
        a: a.map(|x| x.eval_f64(g)),
        b: b.map(|x| x.eval_f64(g)),
    })
}

/// Largest relative operator residual tolerated on a grid.
const GRID_RESIDUAL_TOL: f64 = 1e-6;

fn hyp(cli: &Cli, spec: &Path, grid: &str) -> Result<Output, CliError> {
    let text = read(spec)?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{} is not JSON: {e}", spec.display())))?;
    // `w3 bpz` output nests the data under "spec"
    let v = if v.get("spec").is_some() {
        v["spec"].clone()
    } else {
        v
    };
    let params = hyp_params(&v, cli.common.gamma)?;
    let us = parse_grid(grid)?;
    let sols: Vec<Option<SeriesSolution>> = SeriesSolution::exponents(&params)
        .iter()
        .map(|&s| SeriesSolution::new(&params, s).ok())
        .collect();
    let mut csv = String::from("u,f_0,f_1mB1,f_1mB2,residual\n");
    let mut worst = 0.0f64;
    for &u in &us {
        let mut row = vec![format!("{u:.6}")];
        let mut res = 0.0f64;
        for s in &sols {
            match s.as_ref().map(|s| (s.eval(u), s.residual(u))) {
                Some((Ok(f), Ok(r))) => {
                    row.push(format!("{f:.15e}"));
                    res = res.max(r);
                }
                _ => row.push("nan".into()),
            }
        }
        worst = worst.max(res);
        row.push(format!("{res:.3e}"));
        let _ = writeln!(csv, "{}", row.join(","));
    }
    let check = CheckResult::new(
        "operator_residual",
        worst <= GRID_RESIDUAL_TOL,
        format!(
            "{} grid points, worst relative residual {worst:.2e}",
            us.len()
        ),
        json!({ "points": us.len(), "worst": worst, "params": params }),
    );
    let mut out = report(cli, &[&text], vec![check], None);
    out.csv = Some(csv);
    Ok(out)
}

fn gamma_integrals(cli: &Cli) -> Result<Output, CliError> {
    let gammas: Vec<f64> = match cli.common.gamma {
        Some(g) => vec![g],
        None => INTEGRAL_GAMMAS.to_vec(),
    };
    let mut checks = Vec::new();
    for g in gammas {
        for row in integral_rows(g).map_err(CliError::Config)? {
            checks.push(CheckResult::new(
                format!("{}@gamma={g}", row["name"].as_str().unwrap_or("?")),
                row["pass"] == true,
                format!(
                    "quadrature {:.12e} closed form {:.12e} rel {:.1e}",
                    row["quadrature"].as_f64().unwrap_or(f64::NAN),
                    row["closed_form"].as_f64().unwrap_or(f64::NAN),
                    row["rel_diff"].as_f64().unwrap_or(f64::NAN)
                ),
                row,
            ));
        }
    }
    Ok(report(cli, &[], checks, None))
}

fn parse_pair(s: &str) -> Result<FusionPair, CliError> {
    let bad = || CliError::Usage(format!("pair {s:?} must be bulk:i:j or boundary:i:j"));
    let p: Vec<&str> = s.split(':').collect();
    let [kind, moving, fixed] = p[..] else {
        return Err(bad());
    };
    let kind = match kind {
        "bulk" => PairKind::Bulk,
        "boundary" => PairKind::Boundary,
        _ => return Err(bad()),
    };
    Ok(FusionPair {
        kind,
        moving: moving.parse().map_err(|_| bad())?,
        fixed: fixed.parse().map_err(|_| bad())?,
    })
}

fn gmc(
    cli: &Cli,
    mollifier: &str,
    spacing: Option<f64>,
    ladder: Option<&str>,
    pair: Option<&str>,
) -> Result<Output, CliError> {
    let (cfg, text) = load_config(cli)?;
    let defaults = EstimateOptions::default();
    let mut window = Window::default();
    if let Some(h) = spacing {
        window.spacing = h;
    }
    let opts = EstimateOptions {
        rho: cli.common.rho.unwrap_or(defaults.rho),
        mollifier: Mollifier::from_str(mollifier).map_err(CliError::Usage)?,
        window,
        replicas: cli.common.replicas.unwrap_or(defaults.replicas),
        seed: cli.common.seed.unwrap_or(defaults.seed),
    };
    let Some(ladder) = ladder else {
        let est = estimate_correlator(&cfg, &opts).map_err(config_err)?;
        let result = serde_json::to_value(&est).expect("plain data");
        return Ok(report(cli, &[&text], vec![], Some(result)));
    };
    let distances: Vec<f64> = ladder
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("bad --ladder {ladder:?}")))?;
    let pair = parse_pair(pair.ok_or_else(|| CliError::Usage("--ladder needs --pair".into()))?)?;
    let r = fusion_probe(&cfg, pair, &distances, &opts).map_err(config_err)?;
    let mut csv = String::from("distance,estimate,stderr,log_distance,log_estimate\n");
    for (d, s) in r.distances.iter().zip(&r.estimates) {
        let _ = writeln!(
            csv,
            "{d:.6e},{:.12e},{:.6e},{:.9},{:.9}",
            s.mean,
            s.stderr,
            d.ln(),
            s.mean.ln()
        );
    }
    let check = CheckResult::new(
        "fusion_bound",
        r.bound_holds,
        format!(
            "slope {:.4} vs exponent {:.4} (correction {})",
            r.slope, r.bound_exponent, r.correction_active
        ),
        serde_json::to_value(&r).expect("plain data"),
    );
    let mut out = report(cli, &[&text], vec![check], None);
    out.csv = Some(csv);
    Ok(out)
}

fn suite(cli: &Cli, skip: &[String]) -> Result<Output, CliError> {
    validate_skips(skip).map_err(CliError::Usage)?;
    let d = SuiteOptions::default();
    let opts = SuiteOptions {
        seed: cli.common.seed.unwrap_or(d.seed),
        replicas: cli.common.replicas.unwrap_or(d.replicas),
        rho: cli.common.rho.unwrap_or(d.rho),
    };
    let checks = run_suite(&opts, skip);
    Ok(report(cli, &[], checks, Some(json!({ "options": opts }))))
}
