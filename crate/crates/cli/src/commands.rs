use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Value};

use colorcount::bounds::{self, LogBound};
use colorcount::count::{vertex_set, CountResult, Counter};
use colorcount::coupon::{
    analytic_tails, exact_expected_survivors, jensen_lower_bound, monte_carlo_tails, rational_to_f64, rho_sum,
};
use colorcount::cover::{canonical_cover, random_cover, DpCover};
use colorcount::graph::{enumerate_small_graphs, Graph, NamedGraph};
use colorcount::partial::{FlawThresholds, PartialColoring};
use colorcount::regular::{estimate_expected_colorings, sample_pairing, sample_simple_triangle_free};
use colorcount::CouponInstance;

use crate::args::*;
use crate::error::{CliError, Status};
use crate::output::{json_f64, record, write_csv, write_jsonl};
use crate::schema;

pub fn run(cli: Cli) -> Result<Status, CliError> {
    match cli.command {
        Command::Count(a) => count(&a),
        Command::VerifyCorpus(a) => verify_corpus(&a),
        Command::Coupon(a) => coupon(&a),
        Command::RandomRegular(a) => random_regular(&a),
        Command::Bounds(a) => bounds_cmd(&a),
        Command::Sweep(a) => sweep(&a),
        Command::SchemaCheck(a) => schema_check(&a),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_graph(src: &GraphSource) -> Result<(String, Graph), CliError> {
    if let Some(path) = &src.graph {
        let text = read(path)?;
        let g6 = path.extension().is_some_and(|e| e == "g6") || text.starts_with(">>graph6<<");
        let g = if g6 { Graph::from_graph6(text.trim())? } else { Graph::parse_edge_list(&text)? };
        return Ok((path.display().to_string(), g));
    }
    if let Some(spec) = &src.named {
        return Ok((spec.clone(), spec.parse::<NamedGraph>()?.build()?));
    }
    let s = src.graph6.as_deref().expect("clap requires one graph source");
    Ok((s.to_string(), Graph::from_graph6(s)?))
}

fn build_cover(g: &Graph, a: &CountArgs) -> Result<DpCover, CliError> {
    if let Some(path) = &a.cover {
        let cover = DpCover::from_json_with_base(&read(path)?, g.clone())?;
        if cover.q() != a.q {
            return Err(CliError::Input(format!("cover has fold {} but --q is {}", cover.q(), a.q)));
        }
        return Ok(cover);
    }
    Ok(match a.cover_seed {
        Some(seed) => random_cover(g, a.q, seed)?,
        None => canonical_cover(g, a.q)?,
    })
}

fn count_record(r: &CountResult) -> Value {
    json!({
        "value": r.value.to_string(),
        "method": r.method,
        "work": r.work,
    })
}

fn count(a: &CountArgs) -> Result<Status, CliError> {
    let (label, g) = load_graph(&a.source)?;
    let counter = Counter::new(a.work_limit);
    let n = g.n();
    let in_u = match &a.u {
        Some(list) => vertex_set(n, list)?,
        None => vec![true; n],
    };
    let mut extra = json!({});
    let result = match a.object {
        CountObject::Colorings => counter.colorings(&g, a.q)?,
        CountObject::IndependentSets => counter.independent_sets(&g)?,
        CountObject::HColorings => counter.h_colorings(&build_cover(&g, a)?)?,
        CountObject::Partial => counter.partial_colorings(&build_cover(&g, a)?, &in_u)?,
        CountObject::Good => {
            let delta = g.max_degree().max(1);
            let ell = a.ell.unwrap_or_else(|| bounds::ell(delta, a.q.max(1)));
            let d = a.d.unwrap_or_else(|| bounds::d_threshold(delta, a.q.max(1)));
            extra = json!({ "ell": ell, "d": d });
            counter.good_colorings(&build_cover(&g, a)?, &in_u, FlawThresholds::new(ell, d))?
        }
        CountObject::Completions => {
            let path = a
                .partial
                .as_ref()
                .ok_or_else(|| CliError::Input("--object completions needs --partial".into()))?;
            let f = PartialColoring::from_json(&read(path)?, n)?;
            counter.completions(&build_cover(&g, a)?, &f)?
        }
    };
    let mut res = count_record(&result);
    let obj = res.as_object_mut().expect("object");
    obj.insert("object".into(), json!(a.object));
    obj.insert("graph".into(), json!(label));
    obj.insert("n".into(), json!(n));
    obj.insert("m".into(), json!(g.m()));
    if a.object != CountObject::IndependentSets {
        obj.insert("q".into(), json!(a.q));
    }
    if !extra.as_object().expect("object").is_empty() {
        obj.insert("thresholds".into(), extra);
    }
    write_jsonl(&[record("count", a, res)], a.output.as_deref())?;
    Ok(Status::Success)
}

fn corpus_filter(f: CorpusFilter) -> fn(&Graph) -> bool {
    match f {
        CorpusFilter::TriangleFree => Graph::is_triangle_free,
        CorpusFilter::Bipartite => Graph::is_bipartite,
        CorpusFilter::All => |_| true,
    }
}

fn check(name: &str, holds: bool, vacuous: bool) -> Value {
    json!({ "name": name, "holds": holds, "vacuous": vacuous })
}

fn verify_case(id: &str, g: &Graph, q: usize, counter: &Counter) -> Result<(Value, bool), CliError> {
    let (n, m) = (g.n(), g.m());
    let c = counter.colorings(g, q)?.value;
    let i = counter.independent_sets(g)?.value;
    let mut checks = Vec::new();
    if g.is_triangle_free() {
        let pcol = counter.partial_colorings(&canonical_cover(g, q)?, &vec![true; n])?.value;
        checks.push(check("partial-lower", bounds::partial_bound_met(&pcol, n, m, q), false));
    }
    if q >= 2 && g.is_triangle_free() {
        let b = bounds::main_lower_bound(n, m, g.max_degree(), q)?;
        checks.push(check("main-lower", b.vacuous || b.is_met_by(&c, 10), b.vacuous));
    }
    checks.push(check("independent-set-chain", c <= i.pow(q as u32), false));
    if g.is_bipartite() {
        checks.push(check("bipartite-baseline", bounds::partial_bound_met(&c, n, m, q), false));
    }
    let pass = checks.iter().all(|c| c["holds"] == json!(true));
    let result = json!({
        "kind": "case",
        "graph": id,
        "n": n,
        "m": m,
        "q": q,
        "colorings": c.to_string(),
        "independent_sets": i.to_string(),
        "checks": checks,
        "pass": pass,
    });
    Ok((result, pass))
}

fn verify_corpus(a: &VerifyArgs) -> Result<Status, CliError> {
    if a.q_min < 1 || a.q_min > a.q_max {
        return Err(CliError::Input(format!("need 1 ≤ q-min ≤ q-max, got {}..{}", a.q_min, a.q_max)));
    }
    let keep = corpus_filter(a.filter);
    let mut graphs: Vec<(String, Graph)> = enumerate_small_graphs(a.n_max, keep)?
        .into_iter()
        .map(|cg| (cg.id, cg.graph))
        .collect();
    let mut records = Vec::new();
    let mut rejected = 0;
    for spec in &a.include {
        let g = spec.parse::<NamedGraph>()?.build()?;
        if keep(&g) {
            graphs.push((spec.clone(), g));
        } else {
            rejected += 1;
            let reason = format!("fails the {:?} precondition", a.filter).to_lowercase();
            records.push(record("verify-corpus", a, json!({ "kind": "rejected", "graph": spec, "reason": reason })));
        }
    }
    let counter = Counter::new(a.work_limit);
    let cases: Vec<(usize, usize)> = (0..graphs.len())
        .flat_map(|gi| (a.q_min..=a.q_max).map(move |q| (gi, q)))
        .collect();
    let results: Vec<(Value, bool)> = cases
        .par_iter()
        .map(|&(gi, q)| verify_case(&graphs[gi].0, &graphs[gi].1, q, &counter))
        .collect::<Result<_, _>>()?;
    let failures = results.iter().filter(|(_, pass)| !pass).count();
    for (r, _) in results {
        records.push(record("verify-corpus", a, r));
    }
    records.push(record(
        "verify-corpus",
        a,
        json!({
            "kind": "summary",
            "graphs": graphs.len(),
            "cases": cases.len(),
            "failures": failures,
            "rejected": rejected,
            "pass": failures == 0,
        }),
    ));
    write_jsonl(&records, a.output.as_deref())?;
    Ok(if failures == 0 { Status::Success } else { Status::VerificationFailed })
}

fn require_eps(eps: f64) -> Result<(), CliError> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(CliError::Input(format!("--eps must lie in (0, 1), got {eps}")))
    }
}

fn coupon(a: &CouponArgs) -> Result<Status, CliError> {
    require_eps(a.eps)?;
    if a.q == 0 {
        return Err(CliError::Input("--q must be positive".into()));
    }
    let inst = match &a.instance {
        Some(path) => {
            let inst = CouponInstance::from_json(&read(path)?)?;
            if inst.q != a.q || inst.k() != a.k {
                return Err(CliError::Input(format!(
                    "instance has q={} k={} but flags say q={} k={}",
                    inst.q,
                    inst.k(),
                    a.q,
                    a.k
                )));
            }
            inst
        }
        None => CouponInstance::random_seeded(a.q, a.k, a.seed),
    };
    let delta = a.delta.unwrap_or(a.k).max(1);
    let (ell, d) = (bounds::ell(delta, a.q), bounds::d_threshold(delta, a.q));
    let exact = exact_expected_survivors(&inst);
    let tails = monte_carlo_tails(&inst, ell, d, a.trials, a.seed);
    let (tail_small, tail_high) = analytic_tails(a.q, a.eps);
    let row = vec![
        a.q.to_string(),
        a.k.to_string(),
        delta.to_string(),
        a.eps.to_string(),
        tails.trials.to_string(),
        a.seed.to_string(),
        rational_to_f64(&exact).to_string(),
        exact.to_string(),
        jensen_lower_bound(a.q, a.k).to_string(),
        rho_sum(&inst).to_string(),
        ell.to_string(),
        d.to_string(),
        tails.small_list.to_string(),
        tails.small_list_se.to_string(),
        tails.high_degree.to_string(),
        tails.high_degree_se.to_string(),
        tail_small.to_string(),
        tail_high.to_string(),
    ];
    write_csv(&schema::COUPON, a, &[row], a.output.as_deref())?;
    Ok(Status::Success)
}

fn random_regular(a: &RegularArgs) -> Result<Status, CliError> {
    let counter = Counter::new(a.work_limit);
    let est = estimate_expected_colorings(a.n, a.delta, a.q, a.trials, a.seed, &counter)?;
    let (simple, tf): (Vec<bool>, Vec<bool>) = (0..est.trials)
        .into_par_iter()
        .map(|t| -> Result<(bool, bool), CliError> {
            let multi = sample_pairing(a.n, a.delta, a.seed.wrapping_add(t))?.project();
            let tf = multi.is_simple() && multi.simplify().is_some_and(|g| g.is_triangle_free());
            Ok((multi.is_simple(), tf))
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .unzip();
    let frac = |v: &[bool]| v.iter().filter(|&&b| b).count() as f64 / v.len() as f64;
    if let Some(path) = &a.sample_graph {
        let (g, _) = sample_simple_triangle_free(a.n, a.delta, a.seed, a.max_attempts)?;
        std::fs::write(path, g.to_edge_list_string())?;
    }
    let row = vec![
        a.n.to_string(),
        a.delta.to_string(),
        a.q.to_string(),
        est.trials.to_string(),
        est.mean.to_string(),
        est.stderr.to_string(),
        est.ceiling.to_string(),
        est.ratio.to_string(),
        frac(&simple).to_string(),
        frac(&tf).to_string(),
    ];
    write_csv(&schema::RANDOM_REGULAR, a, &[row], a.output.as_deref())?;
    Ok(Status::Success)
}

struct BoundRow {
    id: String,
    log_value: f64,
    vacuous: bool,
}

impl From<LogBound> for BoundRow {
    fn from(b: LogBound) -> Self {
        BoundRow { id: b.formula_id.to_string(), log_value: b.log_value, vacuous: b.vacuous }
    }
}

impl BoundRow {
    fn value_if_small(&self) -> Option<f64> {
        (!self.vacuous && self.log_value < 700.0).then(|| self.log_value.exp())
    }
}

fn bounds_cmd(a: &BoundsArgs) -> Result<Status, CliError> {
    let mut params = bounds::derive_params(a.delta, a.q, a.eps, a.n)?;
    if let Some(m) = a.m {
        params = params.with_edge_count(m);
    }
    let (n, m, q) = (a.n, params.m, a.q);
    let mut rows: Vec<BoundRow> = vec![
        bounds::main_lower_bound(n, m, a.delta, q)?.into(),
        bounds::partial_lower_bound(n, m, q)?.into(),
        bounds::good_lower_bound(n, m, q, a.eps)?.into(),
        bounds::random_upper_bound(n, a.delta, q)?.into(),
        bounds::completion_lower_bound(params.ell, a.k.unwrap_or(n))?.into(),
    ];
    rows.push(BoundRow {
        id: "double-count".into(),
        log_value: bounds::double_count_factor(params.ell, n)?,
        vacuous: false,
    });
    match a.format {
        Format::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.id.clone(),
                        a.delta.to_string(),
                        q.to_string(),
                        n.to_string(),
                        m.to_string(),
                        a.eps.to_string(),
                        r.log_value.to_string(),
                        r.value_if_small().map(|v| v.to_string()).unwrap_or_default(),
                        r.vacuous.to_string(),
                    ]
                })
                .collect();
            write_csv(&schema::BOUNDS, a, &table, a.output.as_deref())?;
        }
        Format::Json => {
            let bound_values: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "formula_id": r.id,
                        "log_value": json_f64(r.log_value),
                        "value_if_small": r.value_if_small(),
                        "vacuous": r.vacuous,
                    })
                })
                .collect();
            let corollary = if a.delta >= 2 {
                serde_json::to_value(bounds::corollary_values(n, a.delta as f64, a.eps)?)?
            } else {
                Value::Null
            };
            let result = json!({ "params": params, "bounds": bound_values, "corollary": corollary });
            write_jsonl(&[record("bounds", a, result)], a.output.as_deref())?;
        }
    }
    Ok(Status::Success)
}

fn sweep(a: &SweepArgs) -> Result<Status, CliError> {
    if a.q_min < 1 || a.q_min > a.q_max {
        return Err(CliError::Input(format!("need 1 ≤ q-min ≤ q-max, got {}..{}", a.q_min, a.q_max)));
    }
    let mut graphs = Vec::new();
    for spec in &a.named {
        graphs.push((spec.clone(), spec.parse::<NamedGraph>()?.build()?));
    }
    if let Some(n_max) = a.corpus_n_max {
        graphs.extend(
            enumerate_small_graphs(n_max, Graph::is_triangle_free)?
                .into_iter()
                .map(|cg| (cg.id, cg.graph)),
        );
    }
    let counter = Counter::new(a.work_limit);
    let cases: Vec<(usize, usize)> = (0..graphs.len())
        .flat_map(|gi| (a.q_min..=a.q_max).map(move |q| (gi, q)))
        .collect();
    let rows: Vec<Vec<String>> = cases
        .par_iter()
        .map(|&(gi, q)| -> Result<Vec<String>, CliError> {
            let (id, g) = &graphs[gi];
            let c = counter.colorings(g, q)?;
            let dmax = g.max_degree();
            Ok(vec![
                id.clone(),
                g.n().to_string(),
                g.m().to_string(),
                dmax.to_string(),
                q.to_string(),
                c.value.to_string(),
                serde_json::to_value(c.method)?.as_str().unwrap_or_default().to_string(),
                bounds::small_delta(dmax, q).to_string(),
                bounds::implied_delta(&c.value, g.n(), g.m(), q).to_string(),
            ])
        })
        .collect::<Result<_, _>>()?;
    write_csv(&schema::SWEEP, a, &rows, a.output.as_deref())?;
    Ok(Status::Success)
}

fn schema_check(a: &SchemaArgs) -> Result<Status, CliError> {
    let mut ok = true;
    for path in &a.files {
        match schema::check_file(path) {
            Ok((n, kind)) => println!("ok {} ({kind}, {n} records)", path.display()),
            Err(e) => {
                ok = false;
                println!("invalid {}: {e}", path.display());
            }
        }
    }
    Ok(if ok { Status::Success } else { Status::VerificationFailed })
}
