//! Subcommand implementations.

use anyhow::{bail, ensure, Context, Result};
use exgpd::estimate::{gpd_mle_fit, mle_fit, mme_fit};
use exgpd::gpd::gpd_pdf;
use exgpd::ingest::{self, Column, Dataset, Delimiter, Tail, Transform};
use exgpd::plot::{self, Axis, PlotSpec, Series};
use exgpd::risk::cte;
use exgpd::tailindex::{self, EstimatePath};
use exgpd::{ExgpdDist, Family, FitResult, Params, SimSpec, SortedSample};
use serde_json::{json, Value};

use crate::output::{meta, write_in, write_json};
use crate::{
    Curve, DatasetArg, DensityArgs, FamilyArg, FitArgs, Format, InputArgs, MethodArg, ModelArg, RiskArgs, SimulateArgs,
    TailArg, TailArgs, TailMethod, TransformArg,
};

const DEFAULT_MAX_K: usize = 1000;

type CurveFn = Box<dyn Fn(f64) -> f64>;

pub fn simulate(a: &SimulateArgs) -> Result<()> {
    let spec = SimSpec {
        family: match a.family {
            FamilyArg::Gpd => Family::Gpd,
            FamilyArg::Gev => Family::Gev,
        },
        mu: a.mu,
        params: Params::new(a.sigma, a.xi)?,
        n: a.n,
        seed: a.seed,
    };
    let draws = spec.draws()?;
    let path = write_in(&a.out, &format!("{}.txt", a.name), &ingest::to_single_column(&draws))?;
    write_json(&a.out, &format!("{}.meta.json", a.name), &meta("simulate", json!(spec)))?;
    println!("{}", path.display());
    Ok(())
}

fn load(a: &InputArgs) -> Result<Dataset> {
    let data = match (&a.input, a.dataset) {
        (_, Some(DatasetArg::Danish)) => ingest::danish(),
        (_, Some(DatasetArg::Bmw)) => ingest::bmw(),
        (Some(path), None) => {
            let column: Option<Column> = a.column.as_deref().map(|c| c.parse().unwrap_or_else(|e| match e {}));
            let delim = a.delimiter.map_or(Delimiter::Auto, Delimiter::Char);
            ingest::load_numeric(path, column.as_ref(), delim).with_context(|| format!("loading {}", path.display()))?
        }
        (None, None) => bail!("no input given"),
    };
    Ok(data.with_transform(match a.transform {
        TransformArg::None => Transform::None,
        TransformArg::Abs => Transform::Abs,
        TransformArg::Negate => Transform::Negate,
    }))
}

fn input_label(a: &InputArgs) -> String {
    match (&a.input, a.dataset) {
        (_, Some(d)) => format!("{d:?}").to_lowercase(),
        (Some(p), None) => p.display().to_string(),
        (None, None) => String::new(),
    }
}

fn region_line(label: &str, path: &EstimatePath, lo: usize, hi: usize) -> Option<(Value, String)> {
    let (a, b) = tailindex::region_between(path, lo, hi)?;
    let text = format!("{label} k=[{lo}, {hi}] xi=[{a:.6}, {b:.6}]");
    Some((json!({ "k": [lo, hi], "xi": [a, b] }), text))
}

pub fn tail(a: &TailArgs) -> Result<()> {
    let data = load(&a.input)?;
    let n = data.len();
    ensure!(n >= 3, "need at least 3 observations, got {n}");
    let tail = match a.tail {
        TailArg::Upper => Tail::Upper,
        TailArg::Lower => Tail::Lower,
    };
    let sample = ingest::prepare_tail_sample(&data, tail);
    let max_k = a.max_k.unwrap_or(n.min(DEFAULT_MAX_K));
    ensure!(max_k >= 3, "--max-k must be at least 3, got {max_k}");

    let want_hill = a.method != TailMethod::Lv;
    let want_lv = a.method != TailMethod::Hill;

    let hill = if want_hill {
        // the Hill estimator needs positive order statistics
        let positive = sample.values().iter().take_while(|&&x| x > 0.0).count();
        if positive >= 2 {
            Some(tailindex::hill_path_to(&sample, positive)?)
        } else if a.method == TailMethod::Hill {
            bail!("the Hill plot needs at least 2 positive values, found {positive}");
        } else {
            eprintln!("note: fewer than 2 positive values; Hill plot skipped");
            None
        }
    } else {
        None
    };
    let lv = if want_lv {
        Some(tailindex::lv_paths(&sample)?)
    } else {
        None
    };

    let window = tailindex::read_window(n).ok();
    if window.is_none() {
        eprintln!("note: n = {n} is too small for the 5%-20% reading window");
    }
    let mut regions = serde_json::Map::new();
    let mut panels = Vec::new();
    let mut files = Vec::new();

    if let Some(h) = &hill {
        let mut spec = PlotSpec::new(format!("Hill plot: {}", sample.source()), "k", "xi_hat");
        spec.push_series(Series::from_path("hill", &h.truncated(max_k)));
        if let Some((lo, hi)) = window {
            if let Some((v, text)) = region_line("hill_region", h, lo, hi) {
                println!("{text}");
                regions.insert("hill_region".into(), v);
            }
        }
        if let Ok((lo, hi)) = tailindex::hill_window(n) {
            if let Some(m) = tailindex::window_mean(h, lo, hi) {
                println!("hill_top5_mean k=[{lo}, {hi}] xi={m:.6}");
                regions.insert("hill_top5_mean".into(), json!({ "k": [lo, hi], "xi": m }));
            }
        }
        files.push(write_in(&a.out, "hill.tsv", &plot::write_tsv(&h.truncated(max_k)))?);
        panels.push(spec);
    }
    if let Some((raw, smoothed)) = &lv {
        let mut spec = PlotSpec::new(format!("LV plot: {}", sample.source()), "k", "xi_hat");
        spec.push_series(Series::from_path("lv", &smoothed.truncated(max_k)));
        if let Some((lo, hi)) = window {
            if let Some((v, text)) = region_line("lv_region", smoothed, lo, hi) {
                println!("{text}");
                let (a, b) = (
                    v["xi"][0].as_f64().unwrap_or(f64::NAN),
                    v["xi"][1].as_f64().unwrap_or(f64::NAN),
                );
                spec.push_ref(Axis::Y, a, format!("{a:.3}"));
                spec.push_ref(Axis::Y, b, format!("{b:.3}"));
                regions.insert("lv_region".into(), v);
            }
            for k in [lo, hi].into_iter().filter(|&k| k <= max_k) {
                spec.push_ref(Axis::X, k as f64, format!("k={k}"));
            }
        }
        files.push(write_in(
            &a.out,
            "lv.tsv",
            &plot::write_tsv(&smoothed.truncated(max_k)),
        )?);
        files.push(write_in(&a.out, "lv_raw.tsv", &plot::write_tsv(&raw.truncated(max_k)))?);
        panels.push(spec);
    }
    if !panels.is_empty() {
        files.push(write_in(&a.out, "tail.svg", &plot::render_panels(&panels)?)?);
    }
    let settings = json!({
        "input": input_label(&a.input),
        "transform": data.transform(),
        "tail": tail,
        "method": format!("{:?}", a.method).to_lowercase(),
        "n": n,
        "max_k": max_k,
        "regions": regions,
    });
    write_json(&a.out, "tail.meta.json", &meta("tail", settings))?;
    for f in files {
        eprintln!("wrote {}", f.display());
    }
    Ok(())
}

fn fit_text(model: &str, r: &FitResult) -> String {
    let opt = |v: Option<f64>| v.map_or("n/a".to_string(), |v| format!("{v:.10}"));
    let se = |i: usize| r.cov.map(|c| c[i][i].sqrt());
    [
        format!("model: {model}"),
        format!("method: {}", r.method),
        format!("n: {}", r.n),
        format!("sigma: {:.10}", r.params.sigma),
        format!("xi: {:.10}", r.params.xi),
        format!("ln_sigma: {:.10}", r.params.sigma.ln()),
        format!("loglik: {}", opt(r.loglik)),
        format!("se_sigma: {}", opt(se(0))),
        format!("se_xi: {}", opt(se(1))),
        format!("iterations: {}", r.iterations),
        format!("at_boundary: {}", r.at_boundary),
    ]
    .join("\n")
}

pub fn fit(a: &FitArgs) -> Result<()> {
    let data = load(&a.input)?;
    let mut values = data.raw().to_vec();
    if a.log_transform {
        ensure!(a.model == ModelArg::Exgpd, "--log-transform applies to exGPD fits only");
        if let Some(bad) = values.iter().find(|&&x| x <= 0.0) {
            bail!("--log-transform needs positive values, found {bad}");
        }
        values.iter_mut().for_each(|x| *x = x.ln());
    }
    let sample = SortedSample::from_unsorted(values, data.name())?;
    let (model, result) = match (a.model, a.method) {
        (ModelArg::Exgpd, MethodArg::Mme) => ("exgpd", mme_fit(&sample)?),
        (ModelArg::Exgpd, MethodArg::Mle) => ("exgpd", mle_fit(&sample, None)?),
        (ModelArg::Gpd, MethodArg::Mle) => ("gpd", gpd_mle_fit(&sample, None)?),
        (ModelArg::Gpd, MethodArg::Mme) => bail!("the method of moments is available for the exGPD only"),
    };
    if result.at_boundary {
        eprintln!("note: the likelihood supremum is at xi -> -1; estimates are the last feasible iterate");
    }
    let report = json!({
        "model": model,
        "input": input_label(&a.input),
        "log_transform": a.log_transform,
        "fit": result,
    });
    match a.format {
        Format::Text => println!("{}", fit_text(model, &result)),
        Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
    }
    if let Some(dir) = &a.out {
        write_json(dir, "fit.json", &meta("fit", report))?;
    }
    Ok(())
}

pub fn risk(a: &RiskArgs) -> Result<()> {
    let d = ExgpdDist::from_sigma_xi(a.sigma, a.xi)?;
    ensure!(!a.levels.is_empty(), "at least one level is needed");
    let reports = a
        .levels
        .iter()
        .map(|&p| cte(&d, p).with_context(|| format!("level {p}")))
        .collect::<Result<Vec<_>>>()?;
    let report = json!({ "sigma": a.sigma, "xi": a.xi, "levels": reports });
    match a.format {
        Format::Text => {
            println!("p\tvar\tmef\tcte");
            for r in &reports {
                println!("{}\t{:.10}\t{:.10}\t{:.10}", r.level, r.var, r.mef_at_var, r.cte);
            }
        }
        Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
    }
    if let Some(dir) = &a.out {
        write_json(dir, "risk.json", &meta("risk", report))?;
    }
    Ok(())
}

fn default_range(d: &ExgpdDist) -> (f64, f64) {
    let lo = d.quantile(0.001).map_or(-5.0, |q| q.min(0.0));
    let hi = d.upper_endpoint().unwrap_or_else(|| d.quantile(0.999).unwrap_or(5.0));
    (lo, hi)
}

pub fn density(a: &DensityArgs) -> Result<()> {
    let params = Params::new(a.sigma, a.xi)?;
    let d = ExgpdDist::new(params);
    let (lo0, hi0) = default_range(&d);
    let (lo, hi) = (a.from.unwrap_or(lo0), a.to.unwrap_or(hi0));
    ensure!(
        lo.is_finite() && hi.is_finite() && lo < hi,
        "invalid range [{lo}, {hi}]"
    );
    ensure!(a.points >= 2, "--points must be at least 2");
    let m = a.points - 1;
    // pin the last node so an endpoint range ends exactly on it
    let grid: Vec<f64> = (0..=m)
        .map(|i| {
            if i == m {
                hi
            } else {
                lo + (hi - lo) * i as f64 / m as f64
            }
        })
        .collect();
    let in_gpd_support = move |x: f64| x >= 0.0 && params.gpd_upper_endpoint().is_none_or(|top| x <= top);
    let (name, gpd_curve, exgpd_curve): (&str, CurveFn, CurveFn) = match a.what {
        Curve::Pdf => (
            "pdf",
            Box::new(move |x| {
                if in_gpd_support(x) {
                    gpd_pdf(params, x)
                } else {
                    f64::NAN
                }
            }),
            Box::new(move |y| d.pdf(y)),
        ),
        Curve::Hazard => (
            "hazard",
            Box::new(move |x| {
                let denom = params.sigma + params.xi * x;
                if in_gpd_support(x) && denom > 0.0 {
                    1.0 / denom
                } else {
                    f64::NAN
                }
            }),
            Box::new(move |y| {
                let h = d.hazard(y);
                if h.is_finite() {
                    h
                } else {
                    f64::NAN
                }
            }),
        ),
    };
    let rows: Vec<Vec<f64>> = grid.iter().map(|&t| vec![t, gpd_curve(t), exgpd_curve(t)]).collect();
    let gpd_col = format!("gpd_{name}");
    let exgpd_col = format!("exgpd_{name}");
    let mut spec = PlotSpec::new(
        format!("GPD vs exGPD {name}: sigma={}, xi={}", a.sigma, a.xi),
        "x",
        name,
    );
    spec.push_series(Series::new("GPD", rows.iter().map(|r| (r[0], r[1]))));
    spec.push_series(Series::new("exGPD", rows.iter().map(|r| (r[0], r[2]))));
    let files = [
        write_in(
            &a.out,
            "density.tsv",
            &plot::write_columns(&["x", &gpd_col, &exgpd_col], rows),
        )?,
        write_in(&a.out, "density.svg", &plot::render_svg(&spec)?)?,
    ];
    let settings = json!({ "sigma": a.sigma, "xi": a.xi, "what": name, "range": [lo, hi], "points": a.points });
    write_json(&a.out, "density.meta.json", &meta("density", settings))?;
    for f in files {
        eprintln!("wrote {}", f.display());
    }
    Ok(())
}
