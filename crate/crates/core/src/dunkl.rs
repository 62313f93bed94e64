//! Dunkl operators on `A` and the operator form of the defining relations.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::coeff::Field;
use crate::poly::{Accumulator, Monomial, MultiPoly, Permutation, Reducer};
use crate::session::Instance;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DunklError {
    #[error("relation {relation} {indices:?} fails on {witness}")]
    RelationViolation {
        relation: String,
        indices: Vec<usize>,
        witness: String,
    },
}

/// `D_{y_i - y_j}` for 0-based ambient indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DunklOp {
    pub i: usize,
    pub j: usize,
}

impl DunklOp {
    pub fn new(i: usize, j: usize) -> Self {
        assert!(i != j, "a Dunkl operator needs distinct indices");
        Self { i, j }
    }

    /// `D_{y_i - y_n}`, the operator attached to `u_i`.
    pub fn u(n: usize, i: usize) -> Self {
        Self::new(i, n - 1)
    }
}

/// `D_{y_i - y_j} f = d_{y_i - y_j} f - c sum_{m != i} (1 - s_{mi}) / (x_i - x_m) f
/// + c sum_{m != j} (1 - s_{mj}) / (x_j - x_m) f`, on the ambient lift of `f`.
pub fn dunkl_apply<K: Field>(inst: &Instance<K>, op: DunklOp, f: &MultiPoly<K::Elem>) -> MultiPoly<K::Elem> {
    let k = &inst.field;
    let n = f.nvars();
    let mut acc = Accumulator::new(k);
    for (mono, a) in f.terms() {
        apply_to_term(inst, op, mono, a, &mut acc);
    }
    Reducer::new(n, k).reduce(acc.into_terms())
}

fn apply_to_term<K: Field>(
    inst: &Instance<K>,
    op: DunklOp,
    mono: Monomial,
    a: &K::Elem,
    acc: &mut Accumulator<'_, K>,
) {
    let k = &inst.field;
    let n = inst.n();
    let ca = k.mul(&inst.c, a);
    let minus_ca = k.neg(&ca);
    acc.partial_diff(mono, op.i, op.j, a);
    for m in 0..n {
        if m != op.i {
            acc.divided_difference(mono, op.i, m, &minus_ca);
        }
        if m != op.j {
            acc.divided_difference(mono, op.j, m, &ca);
        }
    }
}

/// Dunkl images of a batch of monomials, sharing one reducer.
pub(crate) fn dunkl_monomials<K: Field>(
    inst: &Instance<K>,
    op: DunklOp,
    monos: &[Monomial],
) -> Vec<MultiPoly<K::Elem>> {
    let k = &inst.field;
    let one = k.one();
    let mut reducer = Reducer::new(inst.n(), k);
    monos
        .iter()
        .map(|&m| {
            let mut acc = Accumulator::new(k);
            apply_to_term(inst, op, m, &one, &mut acc);
            reducer.reduce(acc.into_terms())
        })
        .collect()
}

/// True iff `D_{y_i - y_1} f = 0` for `i = 2..n`; these operators span `h`.
pub fn is_singular<K: Field>(inst: &Instance<K>, f: &MultiPoly<K::Elem>) -> bool {
    (1..inst.n()).all(|i| dunkl_apply(inst, DunklOp::new(i, 0), f).is_zero())
}

/// One `D_{y_i - y_1} f_k` evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularCheck {
    /// 1-based generator index `k`.
    pub generator: usize,
    /// 1-based operator index `i` in `D_{y_i - y_1}`.
    pub operator: usize,
    pub zero: bool,
}

/// All `(n-1)^2` checks `D_{y_i - y_1} f_k = 0`.
pub fn singularity_checks<K: Field>(inst: &Instance<K>, generators: &[MultiPoly<K::Elem>]) -> Vec<SingularCheck> {
    let n = inst.n();
    let pairs: Vec<(usize, usize)> = (0..generators.len())
        .flat_map(|g| (1..n).map(move |i| (g, i)))
        .collect();
    pairs
        .into_par_iter()
        .map(|(g, i)| SingularCheck {
            generator: g + 1,
            operator: i + 1,
            zero: dunkl_apply(inst, DunklOp::new(i, 0), &generators[g]).is_zero(),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Outcome of one relation on every tested monomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationRecord {
    pub relation: String,
    /// 1-based indices, in the order they appear in the relation's name.
    pub indices: Vec<usize>,
    /// Largest degree tested.
    pub degree: u32,
    /// First monomial on which the relation failed.
    pub witness: Option<String>,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub records: Vec<RelationRecord>,
    pub passed: bool,
}

impl RelationReport {
    pub fn into_result(self) -> Result<Self, DunklError> {
        match self.records.iter().find(|r| r.status == Status::Fail) {
            Some(r) => Err(DunklError::RelationViolation {
                relation: r.relation.clone(),
                indices: r.indices.clone(),
                witness: r.witness.clone().unwrap_or_default(),
            }),
            None => Ok(self),
        }
    }
}

pub const REL_X_I: &str = "[y_i-y_j, x_i] = 1 - c s_ij - c sum_{t!=i} s_it";
pub const REL_X_L: &str = "[y_i-y_j, x_l] = c s_il - c s_jl";
pub const REL_COMMUTE: &str = "[y_i-y_j, y_l-y_m] = 0";

#[derive(Debug, Clone)]
enum Relation {
    XI(usize, usize),
    XL(usize, usize, usize),
    Commute(DunklOp, DunklOp),
}

/// Check the three families of defining relations, with `y`'s acting by
/// Dunkl operators and `x`'s by multiplication, on every basis monomial of
/// degree at most `d_max`.
pub fn check_relations<K: Field>(inst: &Instance<K>, d_max: u32) -> RelationReport {
    let n = inst.n();
    let monos: Vec<Monomial> = (0..=d_max)
        .flat_map(|d| crate::poly::monomial_basis(n, d))
        .collect();

    let mut relations = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                relations.push(Relation::XI(i, j));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                if i != j && l != i && l != j {
                    relations.push(Relation::XL(i, j, l));
                }
            }
        }
    }
    let ops: Vec<DunklOp> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| DunklOp::new(i, j)))
        .collect();
    for (a, &d1) in ops.iter().enumerate() {
        for &d2 in &ops[a + 1..] {
            relations.push(Relation::Commute(d1, d2));
        }
    }

    let records: Vec<RelationRecord> = relations
        .into_par_iter()
        .map(|rel| {
            let witness = monos
                .iter()
                .find(|&&m| !relation_holds(inst, &rel, m))
                .map(|m| m.format(n));
            let (relation, indices) = match rel {
                Relation::XI(i, j) => (REL_X_I, vec![i + 1, j + 1]),
                Relation::XL(i, j, l) => (REL_X_L, vec![i + 1, j + 1, l + 1]),
                Relation::Commute(a, b) => (REL_COMMUTE, vec![a.i + 1, a.j + 1, b.i + 1, b.j + 1]),
            };
            RelationRecord {
                relation: relation.to_string(),
                indices,
                degree: d_max,
                status: if witness.is_none() { Status::Pass } else { Status::Fail },
                witness,
            }
        })
        .collect();
    let passed = records.iter().all(|r| r.status == Status::Pass);
    RelationReport { records, passed }
}

fn relation_holds<K: Field>(inst: &Instance<K>, rel: &Relation, m: Monomial) -> bool {
    let (n, k) = (inst.n(), &inst.field);
    let f = MultiPoly::monomial(n, m, k.one(), k);
    let commutator = |op: DunklOp, l: usize| {
        let x = MultiPoly::reduced_var(n, l, k);
        dunkl_apply(inst, op, &x.mul(&f, k)).sub(&x.mul(&dunkl_apply(inst, op, &f), k), k)
    };
    let s = |a: usize, b: usize| f.act(&Permutation::transposition(n, a, b), k);
    match *rel {
        Relation::XI(i, j) => {
            let mut rhs = f.sub(&s(i, j).scale(&inst.c, k), k);
            for t in (0..n).filter(|&t| t != i) {
                rhs = rhs.sub(&s(i, t).scale(&inst.c, k), k);
            }
            commutator(DunklOp::new(i, j), i) == rhs
        }
        Relation::XL(i, j, l) => {
            let rhs = s(i, l).sub(&s(j, l), k).scale(&inst.c, k);
            commutator(DunklOp::new(i, j), l) == rhs
        }
        Relation::Commute(a, b) => {
            dunkl_apply(inst, a, &dunkl_apply(inst, b, &f)) == dunkl_apply(inst, b, &dunkl_apply(inst, a, &f))
        }
    }
}
