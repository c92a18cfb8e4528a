//! A∞-algebras, morphisms and homotopies, and the inductive transfer of a
//! minimal A∞ structure onto cohomology.
//!
//! Operations are stored as m_i tables of degree 2−i. Internally every
//! relation is evaluated in shifted form b_i = s∘m_i∘(s⁻¹)^{⊗i}, where only the
//! Koszul rule contributes signs. With s of degree −1 the two tables differ by
//! the sign (−1)^{Σ_j (i−j)|a_j|} on the word a_1…a_i, an involution.

use crate::barcobar::shuffle_words;
use crate::complexes::{homology, ChainComplex, DgAlgebra, HomologyData};
use crate::exactlin::{Echelon, Field, Matrix, Scalar, Vector};
use crate::graded::{GradedModule, MultiOp, Tensor, Word};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AinfError {
    #[error("U_{0} is not a cycle on {1}")]
    NotCycle(usize, String),
    #[error("no solution for the arity-{0} component on {1}")]
    Unsolvable(usize, String),
    #[error("truncation arity cannot be certified from degrees; pass an explicit arity")]
    Unbounded,
    #[error("arity truncation mismatch: {0} vs {1}")]
    Truncation(usize, usize),
    #[error("f_1 is not invertible")]
    Singular,
    #[error("source and target do not match")]
    Mismatch,
    #[error("{0}")]
    Precondition(String),
}

/// Outcome of an identity check: number of evaluated instances and failures.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn record(&mut self, bad: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if bad && self.violations.len() < 50 {
            self.violations.push(what());
        }
    }
}

/// Components indexed by arity; slot 0 is unused.
pub type Comps = Vec<MultiOp>;

pub(crate) fn comps_new(n: usize, degree_of: impl Fn(usize) -> i64) -> Comps {
    (0..=n).map(|k| MultiOp::new(k, degree_of(k))).collect()
}

/// Parity of Σ_j (n−j)|a_j| for a word a_1..a_n.
fn shift_parity(m: &GradedModule, w: &[usize]) -> bool {
    let n = w.len();
    w.iter().enumerate().map(|(j, &i)| (n - 1 - j) as i64 * m.degree(i)).sum::<i64>() % 2 != 0
}

/// Converts a table between the unshifted and shifted conventions (the map is an involution).
pub fn toggle_shift(op: &MultiOp, src: &GradedModule, shifted_degree: i64) -> MultiOp {
    let mut r = MultiOp::new(op.arity, shifted_degree);
    for (w, v) in &op.table {
        let s = Scalar::sign(shift_parity(src, w));
        r.set(w.clone(), v.scaled(&s));
    }
    r
}

pub(crate) fn sdeg(m: &GradedModule, i: usize) -> i64 {
    m.degree(i) - 1
}

pub(crate) fn sdeg_word(m: &GradedModule, w: &[usize]) -> i64 {
    w.iter().map(|&i| sdeg(m, i)).sum()
}

pub(crate) fn append(t: &Tensor, v: &Vector, sign: &Scalar) -> Tensor {
    let mut out = Tensor::new();
    for (w, c) in t.iter() {
        let cs = c * sign;
        for (i, d) in v.iter() {
            let mut w2 = w.clone();
            w2.push(*i);
            out.add_term(w2, &(&cs * d));
        }
    }
    out
}

pub(crate) fn get(c: &Comps, k: usize) -> Option<&MultiOp> {
    c.get(k).filter(|m| !m.is_zero())
}

/// Σ over decompositions of `w` into consecutive blocks of the tensor of block
/// images under degree-0 components, grouped by block count (≤ tmax).
pub(crate) fn blocks(w: &[usize], comps: &Comps, tmax: usize) -> Vec<Tensor> {
    let n = w.len();
    let mut p: Vec<Vec<Tensor>> = vec![vec![Tensor::new(); tmax + 1]; n + 1];
    p[0][0] = Tensor::single(vec![], Scalar::int(1));
    for j in 1..=n {
        for i in 0..j {
            let Some(f) = get(comps, j - i) else { continue };
            let Some(v) = f.eval(&w[i..j]) else { continue };
            for t in 0..tmax {
                if p[i][t].is_zero() {
                    continue;
                }
                let add = append(&p[i][t], v, &Scalar::int(1));
                p[j][t + 1].add_assign(&add);
            }
        }
    }
    p.pop().unwrap()
}

/// Like [`blocks`] with exactly one block taken from the odd map `mid`; blocks
/// before it use `left`, blocks after it use `right`.
pub(crate) fn blocks_marked(w: &[usize], src: &GradedModule, left: &Comps, mid: &Comps, right: &Comps, tmax: usize) -> Vec<Tensor> {
    let n = w.len();
    let mut pa: Vec<Vec<Tensor>> = vec![vec![Tensor::new(); tmax + 1]; n + 1];
    let mut pb: Vec<Vec<Tensor>> = vec![vec![Tensor::new(); tmax + 1]; n + 1];
    pa[0][0] = Tensor::single(vec![], Scalar::int(1));
    for j in 1..=n {
        for i in 0..j {
            let blk = &w[i..j];
            if let Some(v) = get(left, j - i).and_then(|f| f.eval(blk)) {
                for t in 0..tmax {
                    if !pa[i][t].is_zero() {
                        let add = append(&pa[i][t], v, &Scalar::int(1));
                        pa[j][t + 1].add_assign(&add);
                    }
                }
            }
            if let Some(v) = get(mid, j - i).and_then(|f| f.eval(blk)) {
                let s = Scalar::sign(sdeg_word(src, &w[..i]) % 2 != 0);
                for t in 0..tmax {
                    if !pa[i][t].is_zero() {
                        let add = append(&pa[i][t], v, &s);
                        pb[j][t + 1].add_assign(&add);
                    }
                }
            }
            if let Some(v) = get(right, j - i).and_then(|f| f.eval(blk)) {
                for t in 0..tmax {
                    if !pb[i][t].is_zero() {
                        let add = append(&pb[i][t], v, &Scalar::int(1));
                        pb[j][t + 1].add_assign(&add);
                    }
                }
            }
        }
    }
    pb.pop().unwrap()
}

/// Σ_{r, s∈[smin,smax]} (−1)^{|a_1..a_r|} [a_1..a_r, b_s(a_{r+1}..), ..] for an odd family `ops`.
pub(crate) fn insert_op(w: &[usize], src: &GradedModule, ops: &Comps, smin: usize, smax: usize) -> Tensor {
    let n = w.len();
    let mut out = Tensor::new();
    let mut pre = 0i64;
    for r in 0..n {
        for s in smin.max(1)..=smax.min(n - r) {
            let Some(b) = get(ops, s) else { continue };
            let Some(v) = b.eval(&w[r..r + s]) else { continue };
            let sign = Scalar::sign(pre % 2 != 0);
            for (x, c) in v.iter() {
                let mut w2 = w[..r].to_vec();
                w2.push(*x);
                w2.extend_from_slice(&w[r + s..]);
                out.add_term(w2, &(c * &sign));
            }
        }
        pre += sdeg(src, w[r]);
    }
    out
}

pub(crate) fn apply_by_len(ops: &Comps, t: &Tensor) -> Vector {
    let mut out = Vector::new();
    for (w, c) in t.iter() {
        if let Some(f) = get(ops, w.len()) {
            if let Some(v) = f.eval(w) {
                out.add_scaled(v, c);
            }
        }
    }
    out
}

pub(crate) fn sum_by_len(ops: &Comps, ts: &[Tensor], tmin: usize) -> Vector {
    let mut out = Vector::new();
    for t in ts.iter().skip(tmin) {
        out.add_assign(&apply_by_len(ops, t));
    }
    out
}

/// A∞-algebra with operations m_1..m_N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfinity {
    pub module: GradedModule,
    /// m_i tables, index = arity (slot 0 unused).
    pub ops: Comps,
    pub truncation: usize,
    /// Strict unit, when there is one among the basis elements.
    pub unit: Option<usize>,
}

impl AInfinity {
    pub fn new(module: GradedModule, truncation: usize) -> AInfinity {
        AInfinity { module, ops: comps_new(truncation, |k| 2 - k as i64), truncation, unit: None }
    }

    pub fn from_dga(a: &DgAlgebra) -> AInfinity {
        let mut s = AInfinity::new(a.module().clone(), 2);
        for j in 0..a.module().dim() {
            s.ops[1].set(vec![j], a.d().column(j).clone());
        }
        s.ops[2] = a.mul.clone();
        s.unit = a.unit.as_ref().and_then(|e| match e.first() {
            Some((i, c)) if e.len() == 1 && c.is_one() => Some(*i),
            _ => None,
        });
        s
    }

    pub fn field(&self) -> Field {
        self.module.field
    }

    pub fn m(&self, n: usize) -> Option<&MultiOp> {
        get(&self.ops, n)
    }

    pub fn set_m(&mut self, n: usize, op: MultiOp) {
        if n >= self.ops.len() {
            let start = self.ops.len();
            self.ops.extend((start..=n).map(|k| MultiOp::new(k, 2 - k as i64)));
            self.truncation = self.truncation.max(n);
        }
        self.ops[n] = op;
    }

    /// Shifted operations b_i.
    pub fn shifted(&self) -> Comps {
        self.ops.iter().map(|op| toggle_shift(op, &self.module, 1)).collect()
    }

    pub fn from_shifted(module: GradedModule, b: &Comps, truncation: usize, unit: Option<usize>) -> AInfinity {
        let ops = b.iter().enumerate().map(|(k, op)| {
            let mut t = toggle_shift(op, &module, 2 - k as i64);
            t.arity = k;
            t
        });
        AInfinity { ops: ops.collect(), module, truncation, unit }
    }

    pub fn is_minimal(&self) -> bool {
        self.m(1).is_none()
    }

    /// Largest arity n whose operation can be nonzero by degrees, given the
    /// support of the module outside the unit; `None` when unbounded.
    pub fn degree_bound(&self) -> Option<usize> {
        degree_bound(&self.module, self.unit, self.module.max_degree()?)
    }

    /// The non-unit part as a structure of its own (valid when the unit is strict).
    pub fn reduced(&self) -> (AInfinity, Vec<usize>) {
        let keep: Vec<usize> = (0..self.module.dim()).filter(|&i| Some(i) != self.unit).collect();
        let m = GradedModule::new(self.field(), keep.iter().map(|&i| (self.module.name(i).to_string(), self.module.degree(i)))).unwrap();
        let back: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut r = AInfinity::new(m, self.truncation);
        for (n, op) in self.ops.iter().enumerate().skip(1) {
            for (w, v) in &op.table {
                if w.iter().all(|i| back.contains_key(i)) {
                    let w2: Word = w.iter().map(|i| back[i]).collect();
                    let v2: Vector = v.iter().filter(|(i, _)| back.contains_key(i)).map(|(i, c)| (back[i], c.clone())).collect();
                    r.ops[n].set(w2, v2);
                }
            }
        }
        (r, keep)
    }

    /// The quotient by all basis elements of degree > top. For a structure
    /// whose non-unit part starts in degree ≥ 2 that part is an ideal for every
    /// m_i (i ≥ 2), so the quotient is again an A∞-algebra.
    pub fn below(&self, top: i64) -> AInfinity {
        let keep: Vec<usize> = (0..self.module.dim()).filter(|&i| self.module.degree(i) <= top).collect();
        let m = GradedModule::new(self.field(), keep.iter().map(|&i| (self.module.name(i).to_string(), self.module.degree(i)))).unwrap();
        let back: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut r = AInfinity::new(m, self.truncation);
        r.unit = self.unit.and_then(|u| back.get(&u).copied());
        for (n, op) in self.ops.iter().enumerate().skip(1) {
            for (w, v) in &op.table {
                if w.iter().all(|i| back.contains_key(i)) {
                    let w2: Word = w.iter().map(|i| back[i]).collect();
                    let v2: Vector = v.iter().filter(|(i, _)| back.contains_key(i)).map(|(i, c)| (back[i], c.clone())).collect();
                    if !v2.is_zero() {
                        r.ops[n].set(w2, v2);
                    }
                }
            }
        }
        r
    }

    pub fn describe(&self) -> String {
        let mut s = String::new();
        for (n, op) in self.ops.iter().enumerate().skip(1) {
            for (w, v) in &op.table {
                s.push_str(&format!("m{n}{} = {}\n", self.module.format_word(w), self.module.format_vector(v)));
            }
        }
        s
    }
}

/// Certified arity bound for operations on a module whose non-unit part
/// starts in degree ≥ 2 and whose operations land in degrees ≤ `top`.
pub fn degree_bound(m: &GradedModule, unit: Option<usize>, top: i64) -> Option<usize> {
    let lo = (0..m.dim()).filter(|&i| Some(i) != unit).map(|i| m.degree(i)).min()?;
    if lo < 2 {
        return None;
    }
    Some((((top - 2).max(0)) / (lo - 1)).max(2) as usize)
}

/// Words of length n whose shifted relation output (degree Σ|a| + 2 − n + extra) can be ≤ top.
pub(crate) fn relevant_words(m: &GradedModule, n: usize, top: i64, extra: i64) -> Vec<Word> {
    let (Some(lo), Some(hi)) = (m.min_degree(), m.max_degree()) else { return vec![] };
    let nn = n as i64;
    let mut out = Vec::new();
    for total in (lo * nn)..=(hi * nn) {
        if total + 2 - nn + extra > top {
            break;
        }
        out.extend(m.words(n, total, 0));
    }
    out
}

/// Σ_{r+s+t=n} b_{r+1+t}(1^r ⊗ b_s ⊗ 1^t) = 0 for n ≤ N.
pub fn check_stasheff(a: &AInfinity) -> Report {
    let b = a.shifted();
    let n_max = a.truncation;
    let top = a.module.max_degree().unwrap_or(0);
    let mut rep = Report::default();
    for n in 1..=n_max {
        for w in relevant_words(&a.module, n, top, 0) {
            let inner = insert_op(&w, &a.module, &b, 1, n);
            let v = apply_by_len(&b, &inner);
            rep.record(!v.is_zero(), || format!("arity {n} on {}", a.module.format_word(&w)));
        }
    }
    rep
}

/// Literal check of Σ (−1)^{r+st} m_{r+1+t}(1^r ⊗ m_s ⊗ 1^t) = 0 in unshifted form.
pub fn check_stasheff_unshifted(a: &AInfinity) -> Report {
    let m = &a.module;
    let top = m.max_degree().unwrap_or(0);
    let mut rep = Report::default();
    for n in 1..=a.truncation {
        for w in relevant_words(m, n, top, 0) {
            let mut total = Vector::new();
            for r in 0..n {
                let mut pre = 0i64;
                for &x in &w[..r] {
                    pre += m.degree(x);
                }
                for s in 1..=(n - r) {
                    let t = n - r - s;
                    let (Some(ms), Some(mo)) = (a.m(s), a.m(r + 1 + t)) else { continue };
                    let Some(v) = ms.eval(&w[r..r + s]) else { continue };
                    let sign = Scalar::sign(((r + s * t) as i64 + s as i64 * pre) % 2 != 0);
                    for (x, c) in v.iter() {
                        let mut w2 = w[..r].to_vec();
                        w2.push(*x);
                        w2.extend_from_slice(&w[r + s..]);
                        if let Some(o) = mo.eval(&w2) {
                            total.add_scaled(o, &(c * &sign));
                        }
                    }
                }
            }
            rep.record(!total.is_zero(), || format!("arity {n} on {}", m.format_word(&w)));
        }
    }
    rep
}

/// Vanishing on shuffle products, evaluated in shifted signs.
pub fn check_cinfty(a: &AInfinity) -> Report {
    let b = a.shifted();
    shuffle_report(&a.module, &b, a.truncation, a.module.max_degree().unwrap_or(0), 1)
}

fn shuffle_report(m: &GradedModule, ops: &Comps, n_max: usize, top: i64, deg: i64) -> Report {
    let mut rep = Report::default();
    let sd: Vec<i64> = (0..m.dim()).map(|i| sdeg(m, i)).collect();
    for n in 2..=n_max.min(ops.len().saturating_sub(1)) {
        if get(ops, n).is_none() {
            continue;
        }
        for w in relevant_words(m, n, top, deg - 1) {
            for k in 1..n {
                let sh = shuffle_words(&w[..k], &w[k..], &sd);
                let v = apply_by_len(ops, &sh);
                rep.record(!v.is_zero(), || format!("arity {n} on {} split {k}", m.format_word(&w)));
            }
        }
    }
    rep
}

/// A∞ morphism {f_i} of degrees 1−i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub source: AInfinity,
    pub target: AInfinity,
    pub comps: Comps,
    pub truncation: usize,
}

impl Morphism {
    pub fn identity(a: &AInfinity) -> Morphism {
        let mut comps = comps_new(a.truncation, |k| 1 - k as i64);
        for i in 0..a.module.dim() {
            comps[1].set(vec![i], Vector::unit(i));
        }
        Morphism { source: a.clone(), target: a.clone(), comps, truncation: a.truncation }
    }

    /// Strict morphism given by a degree-0 linear map.
    pub fn strict(source: &AInfinity, target: &AInfinity, f1: &Matrix) -> Morphism {
        let n = source.truncation.max(target.truncation);
        let mut comps = comps_new(n, |k| 1 - k as i64);
        for i in 0..source.module.dim() {
            comps[1].set(vec![i], f1.column(i).clone());
        }
        Morphism { source: source.clone(), target: target.clone(), comps, truncation: n }
    }

    pub fn f(&self, n: usize) -> Option<&MultiOp> {
        get(&self.comps, n)
    }

    pub fn f1_matrix(&self) -> Matrix {
        let cols = (0..self.source.module.dim()).map(|i| self.comps[1].eval_owned(&[i])).collect();
        Matrix::from_columns(self.target.module.dim(), cols)
    }

    pub fn shifted(&self) -> Comps {
        self.comps.iter().map(|op| toggle_shift(op, &self.source.module, 0)).collect()
    }

    fn from_shifted(source: &AInfinity, target: &AInfinity, f: &Comps, truncation: usize) -> Morphism {
        let comps = f.iter().enumerate().map(|(k, op)| {
            let mut t = toggle_shift(op, &source.module, 1 - k as i64);
            t.arity = k;
            t
        });
        Morphism { source: source.clone(), target: target.clone(), comps: comps.collect(), truncation }
    }
}

pub(crate) fn pad(c: &Comps, n: usize, deg: impl Fn(usize) -> i64) -> Comps {
    let mut c = c.clone();
    while c.len() <= n {
        let k = c.len();
        c.push(MultiOp::new(k, deg(k)));
    }
    c
}

/// The arity-n morphism relation LHS − RHS in shifted form, on every word
/// where it can be nonzero; zero entries are omitted.
pub fn morphism_defect(f: &Morphism, n: usize) -> MultiOp {
    let b = pad(&f.source.shifted(), n.max(f.truncation), |_| 1);
    let b2 = pad(&f.target.shifted(), n.max(f.truncation), |_| 1);
    let ff = pad(&f.shifted(), n.max(f.truncation), |_| 0);
    let top = f.target.module.max_degree().unwrap_or(0);
    let tmax = b2.len() - 1;
    let mut out = MultiOp::new(n, 1);
    for w in relevant_words(&f.source.module, n, top, 0) {
        let mut v = apply_by_len(&ff, &insert_op(&w, &f.source.module, &b, 1, n));
        v.sub_assign(&sum_by_len(&b2, &blocks(&w, &ff, tmax.min(n)), 1));
        if !v.is_zero() {
            out.set(w, v);
        }
    }
    out
}

/// Σ F(1^r ⊗ b_s ⊗ 1^t) = Σ b'_t(F_{k1} ⊗ … ⊗ F_{kt}) for arities ≤ N.
pub fn check_morphism(f: &Morphism) -> Report {
    let b = pad(&f.source.shifted(), f.truncation, |_| 1);
    let b2 = pad(&f.target.shifted(), f.truncation, |_| 1);
    let ff = pad(&f.shifted(), f.truncation, |_| 0);
    let top = f.target.module.max_degree().unwrap_or(0);
    let tmax = b2.len() - 1;
    let mut rep = Report::default();
    for n in 1..=f.truncation {
        for w in relevant_words(&f.source.module, n, top, 0) {
            let lhs = apply_by_len(&ff, &insert_op(&w, &f.source.module, &b, 1, n));
            let rhs = sum_by_len(&b2, &blocks(&w, &ff, tmax.min(n)), 1);
            rep.record(lhs != rhs, || format!("arity {n} on {}", f.source.module.format_word(&w)));
        }
    }
    rep
}

/// Shuffle vanishing of f_i for i ≥ 2.
pub fn check_cinfty_morphism(f: &Morphism) -> Report {
    let ff = f.shifted();
    let top = f.target.module.max_degree().unwrap_or(0);
    shuffle_report(&f.source.module, &ff, f.truncation, top, 0)
}

/// (g∘f)_n = Σ g_t(f_{k1} ⊗ … ⊗ f_{kt}).
pub fn compose_morphisms(f: &Morphism, g: &Morphism) -> Result<Morphism, AinfError> {
    if f.target.module != g.source.module {
        return Err(AinfError::Mismatch);
    }
    if f.truncation != g.truncation {
        return Err(AinfError::Truncation(f.truncation, g.truncation));
    }
    let n = f.truncation;
    let ff = pad(&f.shifted(), n, |_| 0);
    let gg = pad(&g.shifted(), n, |_| 0);
    let top = g.target.module.max_degree().unwrap_or(0);
    let mut h = comps_new(n, |_| 0);
    for k in 1..=n {
        for w in relevant_words(&f.source.module, k, top, -1) {
            let v = sum_by_len(&gg, &blocks(&w, &ff, k), 1);
            h[k].set(w, v);
        }
    }
    Ok(Morphism::from_shifted(&f.source, &g.target, &h, n))
}

/// Inverse of a morphism with invertible f_1, solved arity by arity from g∘f = id.
pub fn invert_iso(f: &Morphism) -> Result<Morphism, AinfError> {
    let n = f.truncation;
    let f1 = f.f1_matrix();
    if f1.rows != f1.cols {
        return Err(AinfError::Singular);
    }
    let e = Echelon::from_columns(f1.rows, f1.columns().iter().cloned());
    if e.rank() != f1.rows {
        return Err(AinfError::Singular);
    }
    let inv_cols: Vec<Vector> = (0..f1.rows).map(|i| e.solve(&Vector::unit(i)).unwrap()).collect();
    let inv = Matrix::from_columns(f1.cols, inv_cols);
    let ff = pad(&f.shifted(), n, |_| 0);
    let mut g = comps_new(n, |_| 0);
    for j in 0..f1.rows {
        g[1].set(vec![j], inv.column(j).clone());
    }
    let src = &f.target.module;
    let top = f.source.module.max_degree().unwrap_or(0);
    for k in 2..=n {
        for w in relevant_words(src, k, top, -1) {
            // u = (f_1^{-1})^{⊗k} w, then g_k(w) = −Σ_{t<k} g_t(blocks of u)
            let mut u = Tensor::single(vec![], Scalar::int(1));
            for &x in &w {
                u = append(&u, inv.column(x), &Scalar::int(1));
            }
            let mut acc = Vector::new();
            for (uw, c) in u.iter() {
                let bl = blocks(uw, &ff, k - 1);
                acc.add_scaled(&sum_by_len(&g, &bl, 1), c);
            }
            g[k].set(w, acc.scaled(&Scalar::int(-1)));
        }
    }
    Ok(Morphism::from_shifted(&f.target, &f.source, &g, n))
}

/// A∞ homotopy {h_i} of degrees −i between parallel morphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homotopy {
    pub comps: Comps,
}

impl Homotopy {
    pub fn zero(n: usize) -> Homotopy {
        Homotopy { comps: comps_new(n, |k| -(k as i64)) }
    }

    fn shifted(&self, src: &GradedModule) -> Comps {
        self.comps.iter().map(|op| toggle_shift(op, src, -1)).collect()
    }
}

/// f_n − g_n = Σ h(1^r ⊗ m_s ⊗ 1^t) + Σ m'(f..f ⊗ h ⊗ g..g), in shifted signs.
pub fn check_homotopy(f: &Morphism, g: &Morphism, h: &Homotopy) -> Report {
    let n = f.truncation.max(g.truncation);
    let src = &f.source.module;
    let b = pad(&f.source.shifted(), n, |_| 1);
    let b2 = pad(&f.target.shifted(), n, |_| 1);
    let ff = pad(&f.shifted(), n, |_| 0);
    let gg = pad(&g.shifted(), n, |_| 0);
    let hh = pad(&h.shifted(src), n, |_| -1);
    let top = f.target.module.max_degree().unwrap_or(0);
    let mut rep = Report::default();
    for k in 1..=n {
        for w in relevant_words(src, k, top, -1) {
            let mut lhs = apply_by_len(&ff, &Tensor::single(w.clone(), Scalar::int(1)));
            lhs.sub_assign(&apply_by_len(&gg, &Tensor::single(w.clone(), Scalar::int(1))));
            let mut rhs = apply_by_len(&hh, &insert_op(&w, src, &b, 1, k));
            rhs.add_assign(&sum_by_len(&b2, &blocks_marked(&w, src, &ff, &hh, &gg, k), 1));
            rep.record(lhs != rhs, || format!("arity {k} on {}", src.format_word(&w)));
        }
    }
    rep
}

/// Linear-solver choice for the inductive steps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Pivoting {
    #[default]
    Lowest,
    /// Pivots by highest index; gives different representatives and preimages.
    Highest,
}

/// Solver for d x = v with a chosen pivot order.
struct BoundarySolver {
    e: Echelon,
    n: usize,
    rev: bool,
}

impl BoundarySolver {
    fn new(d: &Matrix, piv: Pivoting) -> BoundarySolver {
        let n = d.rows;
        let rev = piv == Pivoting::Highest;
        let cols: Vec<Vector> = if rev {
            (0..d.cols).rev().map(|j| d.column(j).map_keys(|i| n - 1 - i)).collect()
        } else {
            d.columns().to_vec()
        };
        BoundarySolver { e: Echelon::from_columns(n, cols), n, rev }
    }

    fn solve(&self, v: &Vector) -> Option<Vector> {
        if !self.rev {
            return self.e.solve(v);
        }
        let x = self.e.solve(&v.map_keys(|i| self.n - 1 - i))?;
        Some(x.map_keys(|j| self.n - 1 - j))
    }
}

/// Options for [`transfer_minimal_model`].
#[derive(Clone, Copy, Debug, Default)]
pub struct TransferOptions {
    /// Overrides the certified arity bound.
    pub arity: Option<usize>,
    pub pivoting: Pivoting,
}

/// Result of a transfer: the minimal structure on H, the quasi-isomorphism
/// {f_i}: H → A, and the certificate that fixed the truncation.
#[derive(Clone, Debug)]
pub struct Transfer {
    pub minimal: AInfinity,
    pub morphism: Morphism,
    pub homology: HomologyData,
    pub certificate: String,
}

/// Non-unital A∞ source with its differential complex.
struct Source {
    alg: AInfinity,
    complex: ChainComplex,
}

fn split_unit(a: &AInfinity) -> Option<(AInfinity, Vec<usize>)> {
    let e = a.unit?;
    let m = &a.module;
    if m.degree(e) != 0 || m.dim_in(0) != 1 || m.min_degree() != Some(0) {
        return None;
    }
    let (r, keep) = a.reduced();
    Some((r, keep))
}

fn source_of(a: &AInfinity) -> Source {
    let n = a.module.dim();
    let mut d = Matrix::zero(n, n);
    if let Some(m1) = a.m(1) {
        for (w, v) in &m1.table {
            d.set_column(w[0], v.clone());
        }
    }
    let complex = ChainComplex::new(a.module.clone(), d).expect("m_1 squares to zero");
    Source { alg: a.clone(), complex }
}

/// Minimal model of a dg algebra.
pub fn transfer_dga(a: &DgAlgebra, opts: TransferOptions) -> Result<Transfer, AinfError> {
    transfer_minimal_model(&AInfinity::from_dga(a), opts)
}

/// Transfers an A∞ structure to its cohomology, arity by arity: U_n is
/// assembled from lower stages, m_n = [U_n], and f_n solves d f_n = f_1 m_n − U_n.
pub fn transfer_minimal_model(a: &AInfinity, opts: TransferOptions) -> Result<Transfer, AinfError> {
    if let Some((red, keep)) = split_unit(a) {
        let t = transfer_reduced(&red, opts)?;
        return Ok(adjoin_unit(a, &keep, t));
    }
    transfer_reduced(a, opts)
}

fn transfer_reduced(a: &AInfinity, opts: TransferOptions) -> Result<Transfer, AinfError> {
    let src = source_of(a);
    let m = &a.module;
    let top = m.max_degree().unwrap_or(0);
    let bound = degree_bound(m, None, top);
    let n_max = match (opts.arity, bound) {
        (Some(n), _) => n.max(2),
        (None, Some(b)) => b,
        (None, None) => return Err(AinfError::Unbounded),
    };
    let certificate = match (opts.arity, bound) {
        (Some(n), Some(b)) if n >= b => format!("arity {n} (degree bound {b}: all higher m_i, f_i vanish)"),
        (Some(n), _) => format!("arity {n} (user truncation; higher operations not certified)"),
        (None, Some(b)) => format!("arity {b} (degree bound: all higher m_i, f_i vanish)"),
        (None, None) => unreachable!(),
    };
    let mut hom = homology(&src.complex);
    if opts.pivoting == Pivoting::Highest {
        rebase_section(&src.complex, &mut hom);
    }
    let solver = BoundarySolver::new(&src.complex.d, opts.pivoting);
    let hm = hom.module.clone();
    let ba = pad(&src.alg.shifted(), n_max, |_| 1);
    let tmax = ba.len() - 1;
    let mut bh = comps_new(n_max, |_| 1);
    let mut ff = comps_new(n_max, |_| 0);
    for i in 0..hm.dim() {
        ff[1].set(vec![i], hom.f1.column(i).clone());
    }
    for n in 2..=n_max {
        for w in relevant_words(&hm, n, top, 0) {
            let mut u = sum_by_len(&ba, &blocks(&w, &ff, tmax.min(n)), 2);
            let corr = apply_by_len(&ff, &insert_op(&w, &hm, &bh, 2, n - 1));
            u.sub_assign(&corr);
            if u.is_zero() {
                continue;
            }
            if !src.complex.d.apply(&u).is_zero() {
                return Err(AinfError::NotCycle(n, hm.format_word(&w)));
            }
            let class = hom.proj.apply(&u);
            let mut rhs = hom.f1.apply(&class);
            rhs.sub_assign(&u);
            let x = solver.solve(&rhs).ok_or_else(|| AinfError::Unsolvable(n, hm.format_word(&w)))?;
            bh[n].set(w.clone(), class);
            ff[n].set(w, x);
        }
    }
    let mut minimal = AInfinity::from_shifted(hm.clone(), &bh, n_max, None);
    minimal.ops[1] = MultiOp::new(1, 1);
    let morphism = Morphism::from_shifted(&minimal, &src.alg, &ff, n_max);
    Ok(Transfer { minimal, morphism, homology: hom, certificate })
}

/// Replaces the section by representatives chosen with reversed pivots,
/// re-based so every representative keeps its homology class.
fn rebase_section(c: &ChainComplex, hom: &mut HomologyData) {
    let n = c.module.dim();
    let hm = hom.module.clone();
    for deg in hm.degrees().collect::<Vec<_>>() {
        let idx = c.module.in_degree(deg);
        let cols: Vec<Vector> = idx.iter().rev().map(|&j| c.d.column(j).clone()).collect();
        let e = Echelon::from_columns(n, cols);
        let cycles: Vec<Vector> = e.relations().iter().map(|r| r.map_keys(|k| idx[idx.len() - 1 - k])).collect();
        let bnd = c.module.in_degree(deg - 1).iter().map(|&j| c.d.column(j).clone()).filter(|v| !v.is_zero());
        let mut span = Echelon::from_columns(n, bnd);
        let mut reps = Vec::new();
        for z in cycles.iter().rev() {
            if !span.contains(z) {
                span.insert(z.clone());
                reps.push(z.clone());
            }
        }
        let classes = Echelon::from_columns(hm.dim(), reps.iter().map(|r| hom.proj.apply(r)));
        for &h in hm.in_degree(deg) {
            let q = classes.solve(&Vector::unit(h)).expect("representatives span cohomology");
            let mut v = Vector::new();
            for (k, coef) in q.iter() {
                v.add_scaled(&reps[*k], coef);
            }
            hom.f1.set_column(h, v);
        }
    }
}

fn adjoin_unit(a: &AInfinity, keep: &[usize], t: Transfer) -> Transfer {
    let e = a.unit.unwrap();
    let hred = &t.minimal.module;
    let mut gens = vec![(a.module.name(e).to_string(), 0i64)];
    gens.extend(hred.gens().iter().map(|g| (g.name.clone(), g.degree)));
    let hm = GradedModule::new(a.field(), gens).unwrap();
    // e sorts first (degree 0 below the reduced part)
    let up = |i: usize| i + 1;
    let n = t.minimal.truncation;
    let mut minimal = AInfinity::new(hm.clone(), n);
    minimal.unit = Some(0);
    for (k, op) in t.minimal.ops.iter().enumerate().skip(1) {
        for (w, v) in &op.table {
            minimal.ops[k].set(w.iter().map(|&i| up(i)).collect(), v.map_keys(|&i| up(i)));
        }
    }
    for i in 0..hm.dim() {
        minimal.ops[2].set(vec![0, i], Vector::unit(i));
        minimal.ops[2].set(vec![i, 0], Vector::unit(i));
    }
    let mut comps = comps_new(n, |k| 1 - k as i64);
    comps[1].set(vec![0], Vector::unit(e));
    for (k, op) in t.morphism.comps.iter().enumerate().skip(1) {
        for (w, v) in &op.table {
            comps[k].set(w.iter().map(|&i| up(i)).collect(), v.map_keys(|&i| keep[i]));
        }
    }
    let morphism = Morphism { source: minimal.clone(), target: a.clone(), comps, truncation: n };
    // homology data of the full complex, with the same basis order as hm
    let src = source_of(a);
    let mut hom = homology(&src.complex);
    let mut f1 = Matrix::zero(a.module.dim(), hm.dim());
    for i in 0..hm.dim() {
        f1.set_column(i, morphism.comps[1].eval_owned(&[i]));
    }
    hom.f1 = f1;
    hom.module = hm.clone();
    let mut proj = Matrix::zero(hm.dim(), a.module.dim());
    proj.add_entry(0, e, &Scalar::int(1));
    for ((r, c), v) in t.homology.proj.entries() {
        proj.add_entry(up(r), keep[c], v);
    }
    hom.proj = proj;
    Transfer { minimal, morphism, homology: hom, certificate: t.certificate }
}

/// Result of transferring a dg algebra map.
#[derive(Clone, Debug)]
pub struct TransferredMap {
    pub map: Morphism,
    /// Homotopy between g∘f and f'∘G as maps H → A'.
    pub homotopy: Homotopy,
    pub lhs: Morphism,
    pub rhs: Morphism,
}

/// Lifts a strict dg algebra map g: A → A' to {g_i}: H(A) → H(A') with
/// f'∘{g_i} homotopic to g∘f, solving for g_n and the homotopy arity by arity.
pub fn transfer_morphism(g: &Matrix, ta: &Transfer, tb: &Transfer) -> Result<TransferredMap, AinfError> {
    let a = &ta.morphism.target;
    let a2 = &tb.morphism.target;
    let h1 = &ta.minimal;
    let h2 = &tb.minimal;
    if (g.rows, g.cols) != (a2.module.dim(), a.module.dim()) {
        return Err(AinfError::Mismatch);
    }
    let n = ta.minimal.truncation.max(tb.minimal.truncation);
    let strict_g = Morphism::strict(a, a2, g);
    let mut f_a = ta.morphism.clone();
    f_a.truncation = n;
    f_a.comps = pad(&f_a.comps, n, |k| 1 - k as i64);
    let mut sg = strict_g.clone();
    sg.truncation = n;
    sg.comps = pad(&sg.comps, n, |k| 1 - k as i64);
    let phi = compose_morphisms(&f_a, &sg)?;
    let src = &h1.module;
    let top = a2.module.max_degree().unwrap_or(0);
    let b = pad(&h1.shifted(), n, |_| 1);
    let b2 = pad(&a2.shifted(), n, |_| 1);
    let tmax = b2.len() - 1;
    let fphi = pad(&phi.shifted(), n, |_| 0);
    let fb = pad(&tb.morphism.shifted(), n, |_| 0);
    let d2 = source_of(a2).complex.d;
    let solver = BoundarySolver::new(&d2, Pivoting::Lowest);
    let mut gg = comps_new(n, |_| 0);
    let mut kk = comps_new(n, |_| -1);
    let mut psi = comps_new(n, |_| 0);
    for k in 1..=n {
        for w in relevant_words(src, k, top, -1) {
            let single = Tensor::single(w.clone(), Scalar::int(1));
            let mut v = apply_by_len(&fphi, &single);
            // Σ_{t≥2} f'_t(G..G)
            let bl = blocks(&w, &gg, k);
            v.sub_assign(&sum_by_len(&fb, &bl, 2));
            v.sub_assign(&apply_by_len(&kk, &insert_op(&w, src, &b, 2, k)));
            let mk = blocks_marked(&w, src, &fphi, &kk, &psi, tmax.min(k));
            v.sub_assign(&sum_by_len(&b2, &mk, 2));
            if !d2.apply(&v).is_zero() {
                return Err(AinfError::NotCycle(k, src.format_word(&w)));
            }
            let class = tb.homology.proj.apply(&v);
            let mut rhs = v.clone();
            rhs.sub_assign(&apply_by_len(&fb, &class.map_keys(|i| vec![*i])));
            let x = solver.solve(&rhs).ok_or_else(|| AinfError::Unsolvable(k, src.format_word(&w)))?;
            gg[k].set(w.clone(), class);
            kk[k].set(w.clone(), x);
        }
        // Ψ = f' ∘ G at arity k
        for w in relevant_words(src, k, top, -1) {
            let p = sum_by_len(&fb, &blocks(&w, &gg, k), 1);
            psi[k].set(w, p);
        }
    }
    let map = Morphism::from_shifted(h1, h2, &gg, n);
    let homotopy = Homotopy { comps: kk.iter().enumerate().map(|(k, op)| {
        let mut t = toggle_shift(op, src, -(k as i64));
        t.arity = k;
        t
    }).collect() };
    let mut fb_m = tb.morphism.clone();
    fb_m.truncation = n;
    fb_m.comps = pad(&fb_m.comps, n, |k| 1 - k as i64);
    let rhs = compose_morphisms(&map, &fb_m)?;
    Ok(TransferredMap { map, homotopy, lhs: phi, rhs })
}
