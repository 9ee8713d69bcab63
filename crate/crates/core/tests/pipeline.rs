use exgpd::estimate::{gpd_mle_fit, mle_fit, mme_fit};
use exgpd::ingest::{self, Delimiter, Tail};
use exgpd::plot::{parse_tsv, render_panels, write_tsv, PlotSpec, Series};
use exgpd::risk::cte;
use exgpd::tailindex::{hill_path, lv_path, read_region};
use exgpd::{ExgpdDist, Family, Params, SimSpec};

#[test]
fn simulate_fit_and_price_risk() {
    let spec = SimSpec {
        family: Family::Gpd,
        mu: 0.0,
        params: Params::new(2.0, 0.4).unwrap(),
        n: 20_000,
        seed: 5,
    };
    let raw = spec.sample().unwrap();
    let logs = raw.map_ln().unwrap();

    let mle = mle_fit(&logs, None).unwrap();
    let gpd = gpd_mle_fit(&raw, None).unwrap();
    assert!((mle.params.xi - gpd.params.xi).abs() < 1e-6);
    assert!((mle.params.sigma - gpd.params.sigma).abs() < 1e-6);
    assert!((mle.params.xi - 0.4).abs() < 0.05);

    let mme = mme_fit(&logs).unwrap();
    assert!(mle.loglik.unwrap() >= exgpd::estimate::exgpd_loglik(logs.values(), mme.params));

    let fitted = ExgpdDist::new(mle.params);
    let truth = ExgpdDist::new(spec.params);
    let (a, b) = (cte(&fitted, 0.99).unwrap(), cte(&truth, 0.99).unwrap());
    assert!((a.cte - b.cte).abs() < 0.1, "{} vs {}", a.cte, b.cte);
}

#[test]
fn dataset_to_plot() {
    let danish = ingest::prepare_tail_sample(&ingest::danish(), Tail::Upper);
    assert_eq!(danish.len(), 2167);
    let lv = lv_path(&danish).unwrap();
    let (lo, hi) = read_region(&lv, danish.len()).unwrap();
    assert!(lo <= hi && lo >= 0.0);

    let shown = lv.truncated(1000);
    let back = parse_tsv(&write_tsv(&shown)).unwrap();
    assert_eq!(back.len(), shown.defined().count());
    for ((k, v), (k2, v2)) in back.iter().zip(shown.defined()) {
        assert_eq!(*k, k2);
        assert!((v - v2).abs() < 1e-11);
    }

    let mut top = PlotSpec::new("Hill", "k", "xi");
    top.push_series(Series::from_path("hill", &hill_path(&danish).unwrap().truncated(1000)));
    let mut bottom = PlotSpec::new("LV", "k", "xi");
    bottom.push_series(Series::from_path("lv", &shown));
    let svg = render_panels(&[top, bottom]).unwrap();
    assert_eq!(svg.matches(r#"class="panel""#).count(), 2);
}

#[test]
fn file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bmw.txt");
    let bmw = ingest::bmw();
    std::fs::write(&path, ingest::to_single_column(bmw.raw())).unwrap();
    let back = ingest::load_numeric(&path, None, Delimiter::Auto).unwrap();
    assert_eq!(back.raw(), bmw.raw());
    assert_eq!(back.len(), 6146);
}
