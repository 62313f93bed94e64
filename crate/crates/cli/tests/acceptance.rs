//! Acceptance suite: one line per criterion, exit status 1 if any fails.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::sync::{LazyLock, OnceLock};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cherednik_core::coeff::{binomial, ExtElem, ExtField, Field, PrimeField, RationalFunc, RationalFuncField};
use cherednik_core::contraform::{compare_at_points, compare_ideals, compare_symbolic};
use cherednik_core::dunkl::{check_relations, singularity_checks, Status, REL_COMMUTE, REL_X_I, REL_X_L};
use cherednik_core::graded::{check_complete_intersection, check_linear_independence, hilbert_series, HilbertReport};
use cherednik_core::poly::{specialize_poly, MultiPoly};
use cherednik_core::series::{
    check_g_low_orders, check_lemma_g, check_lemma_v, expected_witness, extract_fi, singular_vectors, witness_values,
};
use cherednik_core::session::{Instance, Session};

const PAIRS: [(u32, usize); 6] = [(2, 2), (2, 4), (2, 6), (3, 3), (3, 6), (5, 5)];
const SYMBOLIC_GRAM: [(u32, usize); 3] = [(2, 2), (2, 4), (3, 3)];
const RELATION_PAIRS: [(u32, usize); 2] = [(2, 4), (3, 3)];
const POINT_SEED: u64 = 0xacce55;
const COHERENCE_SEEDS: [u64; 3] = [1, 2, 3];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

struct Symbolic {
    inst: Instance<RationalFuncField>,
    gens: Vec<MultiPoly<RationalFunc>>,
    hilbert: OnceLock<HilbertReport>,
}

impl Symbolic {
    fn hilbert(&self) -> &HilbertReport {
        self.hilbert.get_or_init(|| {
            let s = self.inst.session;
            let series = hilbert_series(&self.inst.field, s.n(), &self.gens, s.socle_degree() + 1);
            check_complete_intersection(&s, &series).expect("enough degrees")
        })
    }

    /// `dim I_c,d` for `d <= socle + 1`.
    fn ideal_dims(&self) -> Vec<usize> {
        let s = self.inst.session;
        self.hilbert().dims.iter().enumerate().map(|(d, q)| s.dim_a(d as u32) - q).collect()
    }
}

static SYMBOLIC: LazyLock<HashMap<(u32, usize), Symbolic>> = LazyLock::new(|| {
    PAIRS
        .iter()
        .map(|&(p, n)| {
            let inst = Instance::symbolic(Session::new(p, n).unwrap()).unwrap();
            let gens = singular_vectors(&inst).unwrap();
            ((p, n), Symbolic { inst, gens, hilbert: OnceLock::new() })
        })
        .collect()
});

fn sym(p: u32, n: usize) -> &'static Symbolic {
    &SYMBOLIC[&(p, n)]
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ext_field(p: u32) -> ExtField {
    ExtField::with_min_order(p, 1024).unwrap()
}

fn draw(ext: &ExtField, seed: u64, count: usize) -> Vec<ExtElem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| ext.random(&mut rng)).collect()
}

fn singularity() -> Outcome {
    let mut checks = 0;
    for (p, n) in PAIRS {
        let s = sym(p, n);
        ensure(s.gens.len() == n - 1, || format!("({p},{n}): {} generators", s.gens.len()))?;
        for c in singularity_checks(&s.inst, &s.gens) {
            ensure(c.zero, || format!("({p},{n}): D_{{y_{} - y_1}} f_{} != 0", c.operator, c.generator))?;
            checks += 1;
        }
    }
    Ok(format!("{checks} Dunkl images are exactly zero"))
}

fn hilbert() -> Outcome {
    let mut seen = Vec::new();
    for (p, n) in PAIRS {
        let s = sym(p, n);
        let h = s.hilbert();
        let top = s.inst.session.socle_degree() as usize;
        ensure(h.first_mismatch.is_none(), || format!("({p},{n}): mismatch at degree {:?}", h.first_mismatch))?;
        ensure(h.dims[..=top] == h.expected[..], || format!("({p},{n}): {:?} vs {:?}", h.dims, h.expected))?;
        ensure(h.dims[top + 1] == 0, || format!("({p},{n}): degree {} nonzero", top + 1))?;
        ensure(h.total_dim == (p as usize).pow(n as u32 - 1), || format!("({p},{n}): total {}", h.total_dim))?;
        seen.push(format!("({p},{n}) total {}", h.total_dim));
    }
    Ok(seen.join(", "))
}

fn ideal_equality() -> Outcome {
    for (p, n) in SYMBOLIC_GRAM {
        let s = sym(p, n);
        let d_max = s.inst.session.socle_degree() + 1;
        let r = compare_ideals(&s.inst, &s.gens, d_max);
        ensure(r.containment && r.verdict, || format!("({p},{n}) symbolic Gram: {:?}", r.records))?;
        ensure(r.records.iter().map(|x| x.dim_i).eq(s.ideal_dims()), || format!("({p},{n}): dim I differs from the Hilbert series"))?;
    }
    let mut logged = Vec::new();
    for (p, n) in PAIRS {
        let s = sym(p, n);
        let session = s.inst.session;
        let d_max = session.socle_degree() + 1;
        let dims_i = s.ideal_dims();

        let ext = ext_field(p);
        let points = draw(&ext, POINT_SEED, 3);
        let reports = compare_at_points(session, &ext, &points, d_max).map_err(|e| format!("({p},{n}): {e}"))?;
        for (c0, r) in points.iter().zip(&reports) {
            ensure(r.containment && r.verdict && r.dims_j() == dims_i, || {
                format!("({p},{n}) at c = {}: {:?}", ext.format(c0), r.records)
            })?;
        }
        logged.push(format!(
            "({p},{n}) c0 = {}",
            points.iter().map(|c| ext.format(c)).collect::<Vec<_>>().join(" ")
        ));

        let r = compare_symbolic(session, &s.inst.field, &s.gens, &dims_i, d_max).map_err(|e| format!("({p},{n}): {e}"))?;
        ensure(r.containment && r.verdict, || format!("({p},{n}) symbolic containment: {:?}", r.records))?;
    }
    Ok(format!(
        "symbolic Gram for {SYMBOLIC_GRAM:?}; symbolic containment and dim J for all; seed {POINT_SEED:#x}: {}",
        logged.join("; ")
    ))
}

fn independence() -> Outcome {
    let mut notes = Vec::new();
    for (p, n) in PAIRS {
        let s = sym(p, n);
        let k = &s.inst.field;
        ensure(check_linear_independence(k, &s.gens), || format!("({p},{n}): rank below {}", n - 1))?;
        let (diag, off) = expected_witness(&s.inst).unwrap();
        let w = witness_values(&s.inst, &s.gens);
        for (j, row) in w.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                let want = if i == j { &diag } else { &off };
                ensure(v == want, || format!("({p},{n}): f_{} at x_{} = 1 is {}", i + 1, j + 1, k.format(v)))?;
            }
        }
        if p == 2 {
            let one_minus_c = k.sub(&k.one(), &s.inst.c);
            ensure(diag == one_minus_c, || format!("({p},{n}): diagonal {}", k.format(&diag)))?;
        } else {
            let m = (p - 1) / 2;
            let b = binomial(k, &k.sub(&s.inst.c, &k.one()), m).unwrap();
            ensure(off == k.zero(), || format!("({p},{n}): off-diagonal {}", k.format(&off)))?;
            let signed = if m % 2 == 1 { k.neg(&b) } else { b.clone() };
            ensure(diag == signed, || format!("({p},{n}): diagonal {}", k.format(&diag)))?;
            if diag != b {
                notes.push(format!("({p},{n}): diagonal is -binom(c-1, {m}) = {}", k.format(&diag)));
            }
        }
    }
    let mut msg = "rank n-1 everywhere; witness matrix diag(1-c) with -c off the diagonal for p = 2, diagonal (-1)^M binom(c-1, M) for odd p".to_string();
    if !notes.is_empty() {
        msg.push_str(&format!(" [{}]", notes.join("; ")));
    }
    Ok(msg)
}

fn degeneration() -> Outcome {
    for (p, n) in PAIRS {
        let k = PrimeField::new(p).unwrap();
        let inst = Instance::specialized(Session::new(p, n).unwrap(), k.clone(), 0).unwrap();
        let mut sum = MultiPoly::zero(n);
        for i in 0..n - 1 {
            let fi = extract_fi(&inst, i).map_err(|e| e.to_string())?;
            let want = MultiPoly::var(n, i, &k).pow(p, &k);
            ensure(fi == want, || format!("({p},{n}): f_{} = {}", i + 1, fi.format(&k)))?;
            sum = sum.add(&fi, &k);
        }
        let xn = MultiPoly::reduced_var(n, n - 1, &k).pow(p, &k);
        ensure(xn == sum.neg(&k), || format!("({p},{n}): x_n^p = {}", xn.format(&k)))?;
    }
    Ok("f_i = x_i^p and x_n^p = -(f_1 + ... + f_{n-1}) at c = 0".into())
}

fn lemmas() -> Outcome {
    for (p, n) in PAIRS {
        let inst = &sym(p, n).inst;
        let g = check_g_low_orders(inst).map_err(|e| format!("({p},{n}): {e}"))?;
        ensure(g.vanishing_orders == [0, 1], || format!("({p},{n}): {g:?}"))?;
        let v = check_lemma_v(inst).map_err(|e| format!("({p},{n}): {e}"))?;
        ensure(v.vanishing_orders.len() == p as usize, || format!("({p},{n}): {v:?}"))?;
        let gt = check_lemma_g(inst).map_err(|e| format!("({p},{n}): {e}"))?;
        ensure(gt.vanishing_orders.len() == p as usize + 1, || format!("({p},{n}): {gt:?}"))?;
    }
    Ok("[z^0]g = 1, [z^1]g = 0, [z^l]V = 0 for l < p, [z^l]G = 0 for l <= p, both identities".into())
}

fn relations() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for (p, n) in RELATION_PAIRS {
        let r = check_relations(&sym(p, n).inst, 4);
        for name in [REL_X_I, REL_X_L, REL_COMMUTE] {
            ensure(r.records.iter().any(|x| x.relation == name), || format!("({p},{n}): {name} untested"))?;
        }
        if let Some(bad) = r.records.iter().find(|x| x.status == Status::Fail) {
            return Err(format!("({p},{n}): {} {:?} on {:?}", bad.relation, bad.indices, bad.witness));
        }
        count += r.records.len();
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1} s"))?;
    Ok(format!("{count} relation instances on all monomials of degree <= 4 in {secs:.1} s"))
}

fn cli(args: &[&str], threads: &str) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_cherednik"))
        .args(args)
        .args(["--threads", threads, "--no-timing", "--format", "json"])
        .env_remove("CHEREDNIK_THREADS")
        .env_remove("CHEREDNIK_OUT_DIR")
        .output()
        .expect("binary runs");
    out.stdout
}

fn coherence() -> Outcome {
    for (p, n) in PAIRS {
        let s = sym(p, n);
        let session = s.inst.session;
        let ext = ext_field(p);
        for seed in COHERENCE_SEEDS {
            let c0 = draw(&ext, seed, 1)[0];
            let label = || format!("({p},{n}) seed {seed} c = {}", ext.format(&c0));
            let inst = Instance::specialized(session, ext.clone(), c0).unwrap();
            let direct = singular_vectors(&inst).map_err(|e| e.to_string())?;
            let lowered: Vec<_> = s
                .gens
                .iter()
                .map(|f| specialize_poly(&s.inst.field, f, &ext, &c0))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            ensure(direct == lowered, || format!("{}: generators differ", label()))?;
            let series = hilbert_series(&ext, n, &direct, session.socle_degree() + 1);
            ensure(series.dims == s.hilbert().dims, || format!("{}: {:?}", label(), series.dims))?;
        }
    }
    let runs: [&[&str]; 4] = [
        &["verify", "--p", "2", "--n", "4"],
        &["verify", "--p", "3", "--n", "3", "--symbolic"],
        &["verify", "--p", "2", "--n", "6", "--c", "random", "--seed", "5"],
        &["sweep", "--p", "5", "--n", "5", "--c", "all-Fp"],
    ];
    for args in runs {
        let one = cli(args, "1");
        ensure(!one.is_empty(), || format!("{args:?}: no output"))?;
        ensure(one == cli(args, "4"), || format!("{args:?}: --threads 1 and 4 differ"))?;
    }
    Ok(format!(
        "generators and Hilbert series agree at seeds {COHERENCE_SEEDS:?}; {} CLI runs byte-identical across thread counts",
        runs.len()
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("singularity", singularity),
        ("Hilbert series", hilbert),
        ("I_c = J_c", ideal_equality),
        ("linear independence", independence),
        ("c = 0 degeneration", degeneration),
        ("lemma suite", lemmas),
        ("algebra relations", relations),
        ("determinism and mode coherence", coherence),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): PASS in {secs:.1} s: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL in {secs:.1} s: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
