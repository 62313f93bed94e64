//! The subcommands.

use serde::Serialize;
use serde_json::json;

use cherednik_core::coeff::{ExtElem, Field, RationalFunc, RationalFuncField};
use cherednik_core::contraform::{compare_at_points, compare_ideals, compare_symbolic, kernel_dims_agree, ComparisonReport};
use cherednik_core::dunkl::{check_relations, singularity_checks, Status, REL_COMMUTE, REL_X_I, REL_X_L};
use cherednik_core::graded::{check_complete_intersection, check_linear_independence, hilbert_series, sweep_c, HilbertReport, SweepRow};
use cherednik_core::linalg::Reduce;
use cherednik_core::poly::MultiPoly;
use cherednik_core::series::{
    build_f, build_fi, build_g, check_g_low_orders, check_lemma_g, check_lemma_v, expected_witness, singular_vectors,
    witness_values, LemmaReport, SeriesError,
};
use cherednik_core::session::Instance;

use crate::config::{CMode, ConfigError, Format, SeriesArgs, SeriesKind, SessionConfig};
use crate::report::{to_csv, to_json, to_text, Header, Recorder, VerificationReport};

/// Rendered output and exit status.
#[derive(Debug)]
pub struct Output {
    pub body: String,
    pub exit: i32,
}

impl Output {
    fn from_report(report: &VerificationReport, format: Format, text: &[String]) -> Self {
        let body = match format {
            Format::Json => to_json(report),
            Format::Csv => to_csv(report),
            Format::Text => to_text(report, text),
        };
        Self {
            body,
            exit: if report.passed() { 0 } else { 1 },
        }
    }
}

fn header(cfg: &SessionConfig, command: &str, c: String, field: String, d_max: Option<u32>) -> Header {
    Header {
        command: command.to_string(),
        p: cfg.session.p(),
        n: cfg.session.n(),
        c,
        field,
        seed: cfg.seed,
        d_max,
    }
}

/// Runs `body` over `F_p(c)` or at the configured point, whichever was asked for.
macro_rules! dispatch {
    ($cfg:expr, |$inst:ident, $c:ident, $field:ident| $body:expr) => {{
        match $cfg.point()? {
            None => {
                let $inst = Instance::symbolic($cfg.session)?;
                let $c = "symbolic".to_string();
                let $field = format!("F_{}(c)", $cfg.session.p());
                $body
            }
            Some(c0) => {
                let $inst = Instance::specialized($cfg.session, $cfg.ext.clone(), c0)?;
                let $c = $cfg.format_elem(&c0);
                let $field = $cfg.field_name();
                $body
            }
        }
    }};
}

fn generators<K: Field>(inst: &Instance<K>) -> Result<Vec<MultiPoly<K::Elem>>, ConfigError> {
    singular_vectors(inst).map_err(|e| ConfigError::Other(e.to_string()))
}

#[derive(Serialize)]
struct Generator {
    index: usize,
    degree: Option<u32>,
    polynomial: String,
}

fn describe<K: Field>(inst: &Instance<K>, gens: &[MultiPoly<K::Elem>]) -> (Vec<Generator>, Vec<String>) {
    let list: Vec<Generator> = gens
        .iter()
        .enumerate()
        .map(|(i, f)| Generator {
            index: i + 1,
            degree: f.degree(),
            polynomial: f.format(&inst.field),
        })
        .collect();
    let text = list.iter().map(|g| format!("f_{} = {}", g.index, g.polynomial)).collect();
    (list, text)
}

fn singular_records<K: Field>(inst: &Instance<K>, gens: &[MultiPoly<K::Elem>], rec: &mut Recorder) {
    let checks = singularity_checks(inst, gens);
    for k in 1..=gens.len() {
        rec.check(&format!("singular f_{k}"), json!({ "k": k }), || {
            let bad: Vec<String> = checks
                .iter()
                .filter(|c| c.generator == k && !c.zero)
                .map(|c| format!("D_{{y_{} - y_1}} f_{k} != 0", c.operator))
                .collect();
            (bad.is_empty(), Some(bad.join("; ")))
        });
    }
}

pub fn singular(cfg: &SessionConfig) -> Result<Output, ConfigError> {
    dispatch!(cfg, |inst, c, field| {
        let gens = generators(&inst)?;
        let mut rec = Recorder::new(cfg.timing);
        let (list, text) = describe(&inst, &gens);
        singular_records(&inst, &gens, &mut rec);
        rec.detail("generators", list);
        let report = rec.finish(header(cfg, "singular", c, field, None));
        Ok(Output::from_report(&report, cfg.format, &text))
    })
}

fn hilbert_record<K: Reduce>(
    cfg: &SessionConfig,
    inst: &Instance<K>,
    gens: &[MultiPoly<K::Elem>],
    rec: &mut Recorder,
) -> HilbertReport {
    let mut out = None;
    rec.check("hilbert series", json!({ "d_max": cfg.d_max }), || {
        let series = hilbert_series(&inst.field, inst.n(), gens, cfg.d_max);
        let r = check_complete_intersection(&cfg.session, &series).expect("d_max validated");
        let witness = r.first_mismatch.map(|d| {
            let got = r.dims[d as usize];
            let want = r.expected.get(d as usize).copied().unwrap_or(0);
            format!("degree {d}: dim {got}, expected {want}")
        });
        let witness = witness.or_else(|| (!r.formula_match).then(|| format!("total {}", r.total_dim)));
        let ok = r.formula_match;
        out = Some(r);
        (ok, witness)
    });
    out.unwrap()
}

fn hilbert_text(r: &HilbertReport) -> Vec<String> {
    vec![
        format!("dims: {:?}", r.dims),
        format!("expected: {:?}", r.expected),
        format!("socle degree: {}", r.socle_degree),
        format!("total dimension: {}", r.total_dim),
    ]
}

pub fn hilbert(cfg: &SessionConfig) -> Result<Output, ConfigError> {
    cfg.require_d_max()?;
    dispatch!(cfg, |inst, c, field| {
        let gens = generators(&inst)?;
        let mut rec = Recorder::new(cfg.timing);
        let r = hilbert_record(cfg, &inst, &gens, &mut rec);
        let text = hilbert_text(&r);
        rec.detail("hilbert", &r);
        let report = rec.finish(header(cfg, "hilbert", c, field, Some(cfg.d_max)));
        Ok(Output::from_report(&report, cfg.format, &text))
    })
}

fn lemma_record(rec: &mut Recorder, name: &str, run: impl FnOnce() -> Result<LemmaReport, SeriesError>) {
    rec.check(name, json!({}), || match run() {
        Ok(_) => (true, None),
        Err(e) => (false, Some(e.to_string())),
    });
}

fn relation_records<K: Field>(inst: &Instance<K>, degree: u32, rec: &mut Recorder) {
    let mut report = None;
    for name in [REL_X_I, REL_X_L, REL_COMMUTE] {
        rec.check(name, json!({ "degree": degree }), || {
            let all = report.get_or_insert_with(|| check_relations(inst, degree));
            let fail = all
                .records
                .iter()
                .find(|r| r.relation == name && r.status == Status::Fail);
            let witness = fail.map(|r| format!("indices {:?} on {}", r.indices, r.witness.clone().unwrap_or_default()));
            (fail.is_none(), witness)
        });
    }
}

fn witness_record<K: Field>(inst: &Instance<K>, gens: &[MultiPoly<K::Elem>], rec: &mut Recorder) {
    let k = &inst.field;
    let Ok((diag, off)) = expected_witness(inst) else {
        rec.check("specialization witness", json!({}), || {
            (false, Some("closed form undefined at this c".to_string()))
        });
        return;
    };
    let params = json!({ "diagonal": k.format(&diag), "off_diagonal": k.format(&off) });
    rec.check("specialization witness", params, || {
        let w = witness_values(inst, gens);
        for (j, row) in w.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                let want = if i == j { &diag } else { &off };
                if v != want {
                    return (false, Some(format!("f_{} at x_{} = 1: {}", i + 1, j + 1, k.format(v))));
                }
            }
        }
        (true, None)
    });
}

fn comparison_record(rec: &mut Recorder, name: &str, params: serde_json::Value, report: &ComparisonReport) {
    rec.check(name, params, || {
        let witness = report.clone().into_result().err().map(|e| e.to_string());
        (report.verdict, witness)
    });
}

#[derive(Serialize)]
struct PointComparison {
    c: String,
    report: ComparisonReport,
}

fn verify_body<K: Reduce>(
    cfg: &SessionConfig,
    inst: &Instance<K>,
    relation_degree: u32,
    rec: &mut Recorder,
    compare: impl FnOnce(&[MultiPoly<K::Elem>], &HilbertReport, &mut Recorder),
) -> Result<Vec<String>, ConfigError> {
    lemma_record(rec, "z^2 divides g - 1", || check_g_low_orders(inst));
    lemma_record(rec, "[z^l] V = 0 for l < p, with its differential identity", || check_lemma_v(inst));
    lemma_record(rec, "[z^l] G = 0 for l <= p, with its differential identity", || check_lemma_g(inst));
    relation_records(inst, relation_degree, rec);
    let gens = generators(inst)?;
    let (list, mut text) = describe(inst, &gens);
    rec.detail("generators", list);
    singular_records(inst, &gens, rec);
    rec.check("linear independence", json!({ "rank": gens.len() }), || {
        (check_linear_independence(&inst.field, &gens), Some("generators are dependent".to_string()))
    });
    witness_record(inst, &gens, rec);
    let h = hilbert_record(cfg, inst, &gens, rec);
    text.extend(hilbert_text(&h));
    rec.detail("hilbert", &h);
    compare(&gens, &h, rec);
    Ok(text)
}

pub fn verify(cfg: &SessionConfig, relation_degree: u32, symbolic_gram: bool) -> Result<Output, ConfigError> {
    cfg.require_d_max()?;
    let d_max = cfg.d_max;
    let session = cfg.session;
    let mut rec = Recorder::new(cfg.timing);
    let (text, c, field) = match cfg.point()? {
        Some(c0) => {
            let inst = Instance::specialized(session, cfg.ext.clone(), c0)?;
            let text = verify_body(cfg, &inst, relation_degree, &mut rec, |gens, _, rec| {
                let r = compare_ideals(&inst, gens, d_max);
                comparison_record(rec, "I_c = J_c", json!({ "method": "gram" }), &r);
                rec.detail("comparison", &r);
            })?;
            (text, cfg.format_elem(&c0), cfg.field_name())
        }
        None => {
            let inst = Instance::symbolic(session)?;
            let text = verify_body(cfg, &inst, relation_degree, &mut rec, |gens, h, rec| {
                if symbolic_gram {
                    let r = compare_ideals(&inst, gens, d_max);
                    comparison_record(rec, "I_c = J_c", json!({ "method": "symbolic gram" }), &r);
                    rec.detail("comparison", &r);
                    return;
                }
                compare_default(cfg, &inst.field, gens, h, rec);
            })?;
            (text, "symbolic".to_string(), format!("F_{}(c)", session.p()))
        }
    };
    let report = rec.finish(header(cfg, "verify", c, field, Some(d_max)));
    Ok(Output::from_report(&report, cfg.format, &text))
}

/// Gram matrices at three seeded random points, plus the exact comparison
/// over `F_p(c)` by evaluation.
fn compare_default(
    cfg: &SessionConfig,
    sym: &RationalFuncField,
    gens: &[MultiPoly<RationalFunc>],
    h: &HilbertReport,
    rec: &mut Recorder,
) {
    let session = cfg.session;
    let d_max = cfg.d_max;
    let points: Vec<ExtElem> = cfg.random_points(3);
    let reports = match compare_at_points(session, &cfg.ext, &points, d_max) {
        Ok(r) => r,
        Err(e) => {
            rec.check("I_c = J_c at random points", json!({}), || (false, Some(e.to_string())));
            return;
        }
    };
    let mut at_points = Vec::new();
    for (c0, r) in points.iter().zip(reports.iter()) {
        let c = cfg.format_elem(c0);
        comparison_record(rec, "I_c = J_c at a random point", json!({ "c": c }), r);
        at_points.push(PointComparison { c, report: r.clone() });
    }
    rec.check("kernel dimensions agree across points", json!({ "points": points.len() }), || {
        let dims: Vec<Vec<usize>> = reports.iter().map(|r| r.dims_j()).collect();
        (kernel_dims_agree(&reports), Some(format!("{dims:?}")))
    });
    rec.detail("comparison_points", at_points);
    let dims_i: Vec<usize> = (0..=d_max)
        .map(|d| session.dim_a(d) - h.dims[d as usize])
        .collect();
    match compare_symbolic(session, sym, gens, &dims_i, d_max) {
        Ok(r) => {
            comparison_record(rec, "I_c = J_c", json!({ "method": "evaluation" }), &r);
            rec.detail("comparison", &r);
        }
        Err(e) => rec.check("I_c = J_c", json!({ "method": "evaluation" }), || (false, Some(e.to_string()))),
    }
}

pub const SWEEP_CSV_HEADER: [&str; 5] = ["c", "independent", "hilbert_match", "first_deviation", "error"];

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

pub fn sweep(cfg: &SessionConfig) -> Result<Output, ConfigError> {
    cfg.require_d_max()?;
    let values: Vec<ExtElem> = match &cfg.c {
        CMode::AllFp => (0..cfg.session.p() as i64)
            .map(|v| cfg.element(&[v]))
            .collect::<Result<_, _>>()?,
        CMode::List(list) => list.iter().map(|v| cfg.element(v)).collect::<Result<_, _>>()?,
        other => return Err(ConfigError::Unsupported(format!("{other:?}"))),
    };
    let inst = Instance::symbolic(cfg.session)?;
    let gens = generators(&inst)?;
    let rows: Vec<SweepRow> = sweep_c(&cfg.session, &inst.field, &gens, &cfg.ext, &values, cfg.d_max);
    let body = match cfg.format {
        Format::Json => {
            let doc = json!({
                "command": "sweep",
                "p": cfg.session.p(),
                "n": cfg.session.n(),
                "field": cfg.field_name(),
                "d_max": cfg.d_max,
                "rows": rows,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("serializes");
            s.push('\n');
            s
        }
        Format::Csv | Format::Text => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(SWEEP_CSV_HEADER).expect("in-memory write");
            for r in &rows {
                w.write_record([r.c.clone(), opt(&r.independent), opt(&r.hilbert_match), opt(&r.first_deviation), opt(&r.error)])
                    .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
        }
    };
    Ok(Output { body, exit: 0 })
}

pub fn series(cfg: &SessionConfig, args: &SeriesArgs) -> Result<Output, ConfigError> {
    let order = args.order.unwrap_or(cfg.session.p() as usize);
    if args.which == SeriesKind::Fi && !(1..cfg.session.n()).contains(&args.i) {
        return Err(ConfigError::Other(format!("--i must lie in 1..={}", cfg.session.n() - 1)));
    }
    let dump = dispatch!(cfg, |inst, _c, _field| {
        let s = match args.which {
            SeriesKind::G => Ok(build_g(&inst, order)),
            SeriesKind::F => build_f(&inst, order),
            SeriesKind::Fi => build_fi(&inst, args.i - 1, order),
        };
        s.map_err(|e| ConfigError::Other(e.to_string()))?.dump(&inst.field)
    });
    let body = match cfg.format {
        Format::Json => {
            let lines: Vec<&str> = dump.lines().collect();
            let mut s = serde_json::to_string_pretty(&json!({ "series": lines })).expect("serializes");
            s.push('\n');
            s
        }
        _ => dump,
    };
    Ok(Output { body, exit: 0 })
}
