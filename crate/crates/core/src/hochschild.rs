//! Hochschild cochains of a graded algebra with cup, ⌣₁ and brace operations,
//! the Harrison subcomplex, and minimal A∞ structures viewed as twisting
//! elements m = m₃ + m₄ + ….
//!
//! Cochains are normalized (they vanish when an input is the unit) and are
//! stored in shifted form f̃ = s∘f∘(s⁻¹)^{⊗n}, so that every operation carries
//! Koszul signs only. A cochain in C^{n,k} has shifted degree k + n − 1. The
//! multiplication becomes the odd cochain μ̃ and
//!
//! * f ⌣₁ g = f{g}, f ⌣ g = μ{f, g}, [f, g] = f{g} − (−1)^{|f||g|} g{f},
//! * δf = [μ, f],
//! * a twisting element satisfies δm + m{m} = 0, which is the Stasheff
//!   relation for b = μ̃ + m̃.

use crate::ainfty::{blocks, pad, toggle_shift, AInfinity, Comps, Morphism, Report};
use crate::barcobar::shuffle_words;
use crate::complexes::DgAlgebra;
use crate::exactlin::{kernel_basis, quotient_with_section, Echelon, Matrix, QuotientData, Scalar, Vector};
use crate::graded::{GradedModule, MultiOp, Tensor, Word};
use rand::Rng;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HochError {
    #[error("the algebra has a nonzero differential")]
    NotGraded,
    #[error("the algebra is not graded commutative")]
    NotCommutative,
    #[error("brace arguments must have arity ≥ 1")]
    ZeroArity,
    #[error("bidegree mismatch: {0}")]
    Degree(String),
    #[error("internal: {0}")]
    Internal(String),
}

/// A graded algebra (H, μ) presented for Hochschild computations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hochschild {
    pub module: GradedModule,
    /// Shifted multiplication μ̃ (degree 1, arity 2).
    pub mu: MultiOp,
    pub unit: Option<usize>,
    /// Basis elements allowed as inputs (all but the unit).
    pub inputs: Vec<usize>,
}

/// f ∈ C^{n,k}(H, H) in shifted form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HochschildCochain {
    pub arity: usize,
    /// Internal degree k.
    pub degree: i64,
    pub table: MultiOp,
}

impl HochschildCochain {
    pub fn zero(arity: usize, degree: i64) -> HochschildCochain {
        HochschildCochain { arity, degree, table: MultiOp::new(arity, degree + arity as i64 - 1) }
    }

    /// Shifted degree k + n − 1.
    pub fn sdegree(&self) -> i64 {
        self.table.degree
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_zero()
    }

    pub fn eval(&self, w: &[usize]) -> Vector {
        self.table.eval_owned(w)
    }

    pub fn plus(&self, o: &HochschildCochain) -> HochschildCochain {
        assert_eq!((self.arity, self.degree), (o.arity, o.degree), "bidegree mismatch");
        HochschildCochain { table: self.table.plus(&o.table), ..self.clone() }
    }

    pub fn scaled(&self, c: &Scalar) -> HochschildCochain {
        HochschildCochain { table: self.table.scaled(c), ..self.clone() }
    }

    pub fn minus(&self, o: &HochschildCochain) -> HochschildCochain {
        self.plus(&o.scaled(&Scalar::int(-1)))
    }
}

fn sdeg(m: &GradedModule, i: usize) -> i64 {
    m.degree(i) - 1
}

impl Hochschild {
    pub fn new(a: &DgAlgebra) -> Result<Hochschild, HochError> {
        if !a.d().is_zero() {
            return Err(HochError::NotGraded);
        }
        Self::from_ainfinity(&AInfinity::from_dga(a))
    }

    /// The graded algebra (H, m₂) underlying a minimal A∞ structure.
    pub fn from_ainfinity(a: &AInfinity) -> Result<Hochschild, HochError> {
        if !a.is_minimal() {
            return Err(HochError::NotGraded);
        }
        let mu = a.m(2).map(|m| toggle_shift(m, &a.module, 1)).unwrap_or_else(|| MultiOp::new(2, 1));
        let inputs = (0..a.module.dim()).filter(|&i| Some(i) != a.unit).collect();
        Ok(Hochschild { module: a.module.clone(), mu, unit: a.unit, inputs })
    }

    /// μ̃ as a cochain; it keeps its values on the unit, which matter when
    /// other cochains output the unit.
    pub fn mu_cochain(&self) -> HochschildCochain {
        HochschildCochain { arity: 2, degree: 0, table: self.mu.clone() }
    }

    pub fn identity(&self) -> HochschildCochain {
        let mut f = HochschildCochain::zero(1, 0);
        for &i in &self.inputs {
            f.table.set(vec![i], Vector::unit(i));
        }
        f
    }

    /// Normalized input words of length n.
    pub fn words(&self, n: usize) -> Vec<Word> {
        let mut out: Vec<Word> = vec![vec![]];
        for _ in 0..n {
            out = out.into_iter().flat_map(|w| self.inputs.iter().map(move |&i| [w.clone(), vec![i]].concat())).collect();
        }
        out
    }

    /// Normalized words of length n on which a cochain of internal degree k can be nonzero.
    pub fn words_for(&self, n: usize, k: i64) -> Vec<Word> {
        let m = &self.module;
        let (Some(lo), Some(hi)) = (m.min_degree(), m.max_degree()) else { return vec![] };
        let din: Vec<i64> = self.inputs.iter().map(|&i| m.degree(i)).collect();
        let (Some(&a), Some(&b)) = (din.iter().min(), din.iter().max()) else {
            return if n == 0 && !m.in_degree(k).is_empty() { vec![vec![]] } else { vec![] };
        };
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        self.words_rec(n, k, (lo, hi), (a, b), 0, &mut cur, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn words_rec(&self, n: usize, k: i64, range: (i64, i64), step: (i64, i64), sum: i64, cur: &mut Word, out: &mut Vec<Word>) {
        let left = (n - cur.len()) as i64;
        if sum + step.0 * left + k > range.1 || sum + step.1 * left + k < range.0 {
            return;
        }
        if left == 0 {
            if !self.module.in_degree(sum + k).is_empty() {
                out.push(cur.clone());
            }
            return;
        }
        for &i in &self.inputs {
            cur.push(i);
            self.words_rec(n, k, range, step, sum + self.module.degree(i), cur, out);
            cur.pop();
        }
    }

    /// Basis (word, output) of C^{n,k}.
    pub fn basis(&self, n: usize, k: i64) -> Vec<(Word, usize)> {
        let mut out = Vec::new();
        for w in self.words_for(n, k) {
            let d = self.module.word_degree(&w) + k;
            for &j in self.module.in_degree(d) {
                out.push((w.clone(), j));
            }
        }
        out
    }

    pub fn from_coords(&self, n: usize, k: i64, basis: &[(Word, usize)], v: &Vector) -> HochschildCochain {
        let mut f = HochschildCochain::zero(n, k);
        for (i, c) in v.iter() {
            let (w, j) = &basis[*i];
            f.table.add(w.clone(), &Vector::single(*j, c.clone()));
        }
        f
    }

    pub fn coords(&self, f: &HochschildCochain, basis: &[(Word, usize)]) -> Vector {
        let index: BTreeMap<(&Word, usize), usize> = basis.iter().enumerate().map(|(i, (w, j))| ((w, *j), i)).collect();
        let mut v = Vector::new();
        for (w, val) in &f.table.table {
            for (j, c) in val.iter() {
                let i = index.get(&(w, *j)).unwrap_or_else(|| panic!("cochain entry outside the basis at {}", self.module.format_word(w)));
                v.add_term(*i, c);
            }
        }
        v
    }

    /// Converts an unshifted table of internal degree k.
    pub fn from_unshifted(&self, op: &MultiOp, k: i64) -> Result<HochschildCochain, HochError> {
        op.check_degree(&self.module, &self.module).map_err(|e| HochError::Degree(e.to_string()))?;
        if op.degree != k {
            return Err(HochError::Degree(format!("table degree {} ≠ {k}", op.degree)));
        }
        let mut table = toggle_shift(op, &self.module, k + op.arity as i64 - 1);
        table.table.retain(|w, _| w.iter().all(|i| Some(*i) != self.unit));
        Ok(HochschildCochain { arity: op.arity, degree: k, table })
    }

    pub fn unshifted(&self, f: &HochschildCochain) -> MultiOp {
        toggle_shift(&f.table, &self.module, f.degree)
    }

    pub fn random_cochain(&self, n: usize, k: i64, rng: &mut impl Rng) -> HochschildCochain {
        let basis = self.basis(n, k);
        let v: Vector = (0..basis.len()).filter_map(|i| {
            let c: i64 = rng.gen_range(-2..=2);
            (c != 0).then(|| (i, Scalar::int(c)))
        }).collect();
        self.from_coords(n, k, &basis, &v)
    }

    /// f{g₁,…,g_i}: the g's inserted in order into the inputs of f, with the
    /// Koszul sign of each g passing the inputs before it.
    pub fn brace(&self, f: &HochschildCochain, gs: &[&HochschildCochain]) -> Result<HochschildCochain, HochError> {
        if gs.iter().any(|g| g.arity == 0) {
            return Err(HochError::ZeroArity);
        }
        Ok(self.brace_any(f, gs))
    }

    /// The brace with arity-0 arguments allowed; only δ on C^0 needs them.
    fn brace_any(&self, f: &HochschildCochain, gs: &[&HochschildCochain]) -> HochschildCochain {
        let i = gs.len();
        if i > f.arity {
            let n = f.arity + gs.iter().map(|g| g.arity).sum::<usize>() - i;
            let k = f.degree + gs.iter().map(|g| g.degree).sum::<i64>();
            return HochschildCochain::zero(n, k);
        }
        let n = f.arity + gs.iter().map(|g| g.arity).sum::<usize>() - i;
        let k = f.degree + gs.iter().map(|g| g.degree).sum::<i64>();
        let mut out = HochschildCochain::zero(n, k);
        if f.is_zero() || gs.iter().any(|g| g.is_zero()) {
            return out;
        }
        for w in self.words_for(n, k) {
            let mut acc = Tensor::new();
            self.place(&w, 0, 0, gs, &Tensor::single(vec![], Scalar::int(1)), 0, &mut acc);
            let v = f.table.eval_tensor(&acc);
            out.table.set(w, v);
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn place(&self, w: &[usize], pos: usize, t: usize, gs: &[&HochschildCochain], cur: &Tensor, pre: i64, acc: &mut Tensor) {
        let remaining_g: usize = gs[t..].iter().map(|g| g.arity).sum();
        if t < gs.len() && gs[t].arity == 0 {
            if let Some(v) = gs[t].table.eval(&[]) {
                let s = Scalar::sign(gs[t].sdegree() * pre % 2 != 0);
                self.place(w, pos, t + 1, gs, &extend(cur, v, &s), pre, acc);
            }
        }
        if pos == w.len() {
            if t == gs.len() {
                acc.add_assign(cur);
            }
            return;
        }
        if w.len() - pos > remaining_g {
            let next = extend(cur, &Vector::unit(w[pos]), &Scalar::int(1));
            self.place(w, pos + 1, t, gs, &next, pre + sdeg(&self.module, w[pos]), acc);
        }
        if t < gs.len() && gs[t].arity > 0 && pos + gs[t].arity <= w.len() {
            let g = gs[t];
            let blk = &w[pos..pos + g.arity];
            if let Some(v) = g.table.eval(blk) {
                let s = Scalar::sign(g.sdegree() * pre % 2 != 0);
                let next = extend(cur, v, &s);
                let d: i64 = blk.iter().map(|&x| sdeg(&self.module, x)).sum();
                self.place(w, pos + g.arity, t + 1, gs, &next, pre + d, acc);
            }
        }
    }

    pub fn cup1(&self, f: &HochschildCochain, g: &HochschildCochain) -> HochschildCochain {
        self.brace(f, &[g]).expect("positive arity")
    }

    pub fn cup(&self, f: &HochschildCochain, g: &HochschildCochain) -> HochschildCochain {
        self.brace(&self.mu_cochain(), &[f, g]).expect("positive arity")
    }

    pub fn bracket(&self, f: &HochschildCochain, g: &HochschildCochain) -> HochschildCochain {
        let s = Scalar::sign(f.sdegree() * g.sdegree() % 2 != 0);
        self.cup1(f, g).minus(&self.cup1(g, f).scaled(&s))
    }

    /// δf = μ{f} − (−1)^{|f|} f{μ}.
    pub fn hdelta(&self, f: &HochschildCochain) -> HochschildCochain {
        let mu = self.mu_cochain();
        let s = Scalar::sign(f.sdegree() % 2 != 0);
        self.brace_any(&mu, &[f]).minus(&self.cup1(f, &mu).scaled(&s))
    }

    /// Matrix of δ: C^{n,k} → C^{n+1,k} in the given bases.
    pub fn delta_matrix(&self, n: usize, k: i64, src: &[(Word, usize)], tgt: &[(Word, usize)]) -> Matrix {
        let cols = (0..src.len())
            .map(|i| {
                let f = self.from_coords(n, k, src, &Vector::unit(i));
                self.coords(&self.hdelta(&f), tgt)
            })
            .collect();
        Matrix::from_columns(tgt.len(), cols)
    }

    /// Values of f on shuffle products of complementary nonempty subwords,
    /// one coordinate per (word, split, output).
    pub fn shuffle_defect(&self, f: &HochschildCochain) -> Vector {
        let sd: Vec<i64> = (0..self.module.dim()).map(|i| sdeg(&self.module, i)).collect();
        let dim = self.module.dim();
        let mut out = Vector::new();
        let n = f.arity;
        for (wi, w) in self.words_for(n, f.degree).iter().enumerate() {
            for k in 1..n {
                let sh = shuffle_words(&w[..k], &w[k..], &sd);
                let v = f.table.eval_tensor(&sh);
                for (j, c) in v.iter() {
                    out.add_term((wi * n + k) * dim + j, c);
                }
            }
        }
        out
    }

    pub fn is_harrison(&self, f: &HochschildCochain) -> bool {
        self.shuffle_defect(f).is_zero()
    }

    fn shuffle_matrix(&self, n: usize, k: i64, basis: &[(Word, usize)]) -> Matrix {
        let rows = self.words_for(n, k).len() * n * self.module.dim();
        let cols = (0..basis.len()).map(|i| self.shuffle_defect(&self.from_coords(n, k, basis, &Vector::unit(i)))).collect();
        Matrix::from_columns(rows.max(1), cols)
    }

    pub fn is_commutative(&self) -> bool {
        self.is_harrison(&self.mu_cochain())
    }
}

fn extend(t: &Tensor, v: &Vector, sign: &Scalar) -> Tensor {
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

/// Cohomology of (C^{*,k}, δ) at arity n, or of its Harrison subcomplex.
#[derive(Clone, Debug)]
pub struct HochCohomology {
    pub arity: usize,
    pub degree: i64,
    pub dim: usize,
    pub cochain_dim: usize,
    pub cocycle_dim: usize,
    pub coboundary_dim: usize,
    pub representatives: Vec<HochschildCochain>,
    basis: Vec<(Word, usize)>,
    quotient: QuotientData,
}

impl HochCohomology {
    /// Coordinates of the class of a cocycle; `None` if it is not a cocycle of this complex.
    pub fn class_of(&self, h: &Hochschild, f: &HochschildCochain) -> Option<Vector> {
        if !h.hdelta(f).is_zero() {
            return None;
        }
        self.quotient.class_of(&h.coords(f, &self.basis))
    }
}

fn cohomology_from(h: &Hochschild, n: usize, k: i64, sub: impl Fn(usize) -> (Vec<(Word, usize)>, Vec<Vector>)) -> HochCohomology {
    let (b_prev, s_prev) = if n >= 1 { sub(n - 1) } else { (vec![], vec![]) };
    let (b_here, s_here) = sub(n);
    let (b_next, _) = sub(n + 1);
    let d_here = h.delta_matrix(n, k, &b_here, &b_next);
    let cycles_local = kernel_basis(&Matrix::from_columns(b_next.len().max(1), s_here.iter().map(|v| d_here.apply(v)).collect()));
    let cycles: Vec<Vector> = cycles_local
        .iter()
        .map(|c| {
            let mut v = Vector::new();
            for (i, x) in c.iter() {
                v.add_scaled(&s_here[*i], x);
            }
            v
        })
        .collect();
    let boundaries: Vec<Vector> = if n >= 1 && !b_prev.is_empty() {
        let d_prev = h.delta_matrix(n - 1, k, &b_prev, &b_here);
        s_prev.iter().map(|v| d_prev.apply(v)).collect()
    } else {
        vec![]
    };
    let coboundary_dim = Echelon::from_columns(b_here.len(), boundaries.iter().cloned()).rank();
    let quotient = quotient_with_section(b_here.len(), &cycles, &boundaries).expect("boundaries lie in cycles");
    let representatives = quotient.section.columns().iter().map(|v| h.from_coords(n, k, &b_here, v)).collect();
    HochCohomology {
        arity: n,
        degree: k,
        dim: quotient.dim(),
        cochain_dim: s_here.len(),
        cocycle_dim: cycles.len(),
        coboundary_dim,
        representatives,
        basis: b_here,
        quotient,
    }
}

/// Hoch^{n,k}(H, H) from the normalized complex.
pub fn hochschild_cohomology(h: &Hochschild, n: usize, k: i64) -> HochCohomology {
    cohomology_from(h, n, k, |m| {
        let b = h.basis(m, k);
        let s = (0..b.len()).map(Vector::unit).collect();
        (b, s)
    })
}

/// Basis of the shuffle-vanishing cochains in C^{n,k}, as coordinate vectors.
pub fn harrison_basis(h: &Hochschild, n: usize, k: i64) -> (Vec<(Word, usize)>, Vec<Vector>) {
    let b = h.basis(n, k);
    if n <= 1 {
        let s = (0..b.len()).map(Vector::unit).collect();
        return (b, s);
    }
    let m = h.shuffle_matrix(n, k, &b);
    (b, kernel_basis(&m))
}

/// Harrison cohomology: the same complex restricted to shuffle-vanishing cochains.
pub fn harrison(h: &Hochschild, n: usize, k: i64) -> Result<HochCohomology, HochError> {
    if !h.is_commutative() {
        return Err(HochError::NotCommutative);
    }
    Ok(cohomology_from(h, n, k, |m| harrison_basis(h, m, k)))
}

/// Minimal A∞ structure (H, μ, m₃, m₄, …, m_N) as m = Σ_{i≥3} m_i ∈ C^{*,2−*}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistingElement {
    pub h: Hochschild,
    /// comps[i] = m_i for 3 ≤ i ≤ arity; lower slots are zero.
    pub comps: Vec<HochschildCochain>,
    pub arity: usize,
}

impl TwistingElement {
    pub fn zero(h: &Hochschild, arity: usize) -> TwistingElement {
        let comps = (0..=arity).map(|i| HochschildCochain::zero(i, 2 - i as i64)).collect();
        TwistingElement { h: h.clone(), comps, arity }
    }

    pub fn from_ainfinity(a: &AInfinity) -> Result<TwistingElement, HochError> {
        let h = Hochschild::from_ainfinity(a)?;
        let b = a.shifted();
        let mut t = TwistingElement::zero(&h, a.truncation.max(2));
        for i in 3..=t.arity {
            if let Some(op) = b.get(i) {
                let mut table = op.clone();
                table.table.retain(|w, _| w.iter().all(|x| Some(*x) != h.unit));
                t.comps[i].table = table;
            }
        }
        Ok(t)
    }

    pub fn to_ainfinity(&self) -> AInfinity {
        AInfinity::from_shifted(self.h.module.clone(), &self.shifted_ops(), self.arity, self.h.unit)
    }

    /// b = μ̃ + m̃ as components by arity (μ keeps its unit entries).
    fn shifted_ops(&self) -> Comps {
        let mut b: Comps = (0..=self.arity).map(|i| MultiOp::new(i, 1)).collect();
        b[2] = self.h.mu.clone();
        for i in 3..=self.arity {
            b[i] = self.comps[i].table.clone();
        }
        b
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }
}

/// Σ_{i+j−1=n} b_i{b_j} = 0 for b = μ + m and every arity n where it can be
/// nonzero; at arity n ≥ 4 this reads δm_{n−1} + Σ_{i,j≥3} m_i{m_j} = 0.
pub fn check_twisting_element(m: &TwistingElement) -> Report {
    let h = &m.h;
    let mut b: Vec<HochschildCochain> = m.comps.clone();
    b[2] = h.mu_cochain();
    let mut rep = Report::default();
    for n in 3..=(2 * m.arity).saturating_sub(1) {
        let mut total = HochschildCochain::zero(n, 3 - n as i64);
        for i in 2..=m.arity {
            let Some(j) = (n + 1).checked_sub(i) else { continue };
            if (2..=m.arity).contains(&j) && !b[i].is_zero() && !b[j].is_zero() {
                total = total.plus(&h.cup1(&b[i], &b[j]));
            }
        }
        rep.record(!total.is_zero(), || format!("arity {n}"));
    }
    rep
}

/// Result of a perturbation: the new element and the isomorphism id + p
/// from the old structure to the new one.
#[derive(Clone, Debug)]
pub struct Perturbed {
    pub element: TwistingElement,
    pub morphism: Morphism,
}

/// Perturbs m by p ∈ C^{n,1−n} (n ≥ 2): the structure m' for which id + p is
/// an A∞ isomorphism (H, m) → (H, m'). Components below arity n + 1 agree and
/// m'_{n+1} = m_{n+1} − δp.
pub fn perturb_element(m: &TwistingElement, p: &HochschildCochain) -> Result<Perturbed, HochError> {
    let h = &m.h;
    if p.arity < 2 || p.degree != 1 - p.arity as i64 {
        return Err(HochError::Degree(format!("p must lie in C^{{n,1−n}} with n ≥ 2, got ({}, {})", p.arity, p.degree)));
    }
    let n_max = m.arity;
    let mut f: Comps = (0..=n_max).map(|i| MultiOp::new(i, 0)).collect();
    for i in 0..h.module.dim() {
        f[1].set(vec![i], Vector::unit(i));
    }
    if p.arity <= n_max {
        f[p.arity] = p.table.clone();
    }
    let b = m.shifted_ops();
    let mut b2 = b.clone();
    for k in 3..=n_max {
        b2[k] = MultiOp::new(k, 1);
        for w in h.words_for(k, 2 - k as i64) {
            let mut v = b[k].eval_owned(&w);
            if p.arity < k {
                let j = k + 1 - p.arity;
                if j <= n_max {
                    let bj = HochschildCochain { arity: j, degree: 2 - j as i64, table: b[j].clone() };
                    let inner = h.brace(p, &[&bj])?;
                    v.add_assign(&inner.eval(&w));
                }
            }
            let bl = blocks(&w, &f, k - 1);
            for (i, t) in bl.iter().enumerate().take(k).skip(2) {
                for (u, c) in t.iter() {
                    if let Some(x) = b2[i].eval(u) {
                        v.add_scaled(x, &-c);
                    }
                }
            }
            b2[k].set(w, v);
        }
    }
    let mut element = TwistingElement::zero(h, n_max);
    for k in 3..=n_max {
        element.comps[k].table = b2[k].clone();
    }
    let source = m.to_ainfinity();
    let target = element.to_ainfinity();
    let padded = pad(&f, n_max, |_| 0);
    let comps = padded.iter().enumerate().map(|(k, op)| {
        let mut t = toggle_shift(op, &h.module, 1 - k as i64);
        t.arity = k;
        t
    });
    let morphism = Morphism { source, target, comps: comps.collect(), truncation: n_max };
    Ok(Perturbed { element, morphism })
}

/// Outcome of the stage-wise attempt to make m vanish by perturbations.
#[derive(Clone, Debug)]
pub enum Trivialization {
    /// Every stage was a coboundary; the p's used, in order.
    Success { steps: Vec<HochschildCochain> },
    /// m_n is a cocycle that is not a coboundary (along the greedy path).
    Obstruction { arity: usize, cocycle: HochschildCochain, class: Vector, steps: Vec<HochschildCochain> },
}

fn solve_delta(h: &Hochschild, target: &HochschildCochain, sub: Option<&dyn Fn(&Hochschild, &HochschildCochain) -> Vector>) -> Option<HochschildCochain> {
    let n = target.arity;
    let k = target.degree;
    let src = h.basis(n - 1, k);
    let tgt = h.basis(n, k);
    let d = h.delta_matrix(n - 1, k, &src, &tgt);
    let (cols, rhs): (Vec<Vector>, Vector) = match sub {
        None => (d.columns().to_vec(), h.coords(target, &tgt)),
        Some(proj) => (
            (0..src.len()).map(|i| proj(h, &h.hdelta(&h.from_coords(n - 1, k, &src, &Vector::unit(i))))).collect(),
            proj(h, target),
        ),
    };
    let dim = cols.iter().chain(std::iter::once(&rhs)).filter_map(|v| v.max_index()).max().map_or(1, |m| m + 1);
    let x = Echelon::from_columns(dim, cols).solve(&rhs)?;
    Some(h.from_coords(n - 1, k, &src, &x))
}

/// Kills m₃, m₄, … in turn: at each stage m_n must be a cocycle; if it is a
/// coboundary δp the element is perturbed by p, otherwise its class is reported.
pub fn try_trivialize(m: &TwistingElement) -> Result<Trivialization, HochError> {
    trivialize(m, false)
}

/// As [`try_trivialize`] inside the Harrison subcomplex: every p vanishes on
/// shuffles, so each step is a C∞ isomorphism and classes live in Harrison cohomology.
pub fn try_trivialize_cinfty(m: &TwistingElement) -> Result<Trivialization, HochError> {
    if !m.h.is_commutative() {
        return Err(HochError::NotCommutative);
    }
    trivialize(m, true)
}

/// p in C^{n−1,k} (Harrison when asked) with δp = target.
pub fn solve_coboundary(h: &Hochschild, target: &HochschildCochain, harrison_only: bool) -> Option<HochschildCochain> {
    let (n, k) = (target.arity, target.degree);
    if !harrison_only {
        return solve_delta(h, target, None);
    }
    let (src, sub) = harrison_basis(h, n - 1, k);
    let tgt = h.basis(n, k);
    let d = h.delta_matrix(n - 1, k, &src, &tgt);
    let cols: Vec<Vector> = sub.iter().map(|v| d.apply(v)).collect();
    let x = Echelon::from_columns(tgt.len().max(1), cols).solve(&h.coords(target, &tgt))?;
    let mut v = Vector::new();
    for (i, c) in x.iter() {
        v.add_scaled(&sub[*i], c);
    }
    Some(h.from_coords(n - 1, k, &src, &v))
}

fn trivialize(m: &TwistingElement, harrison_only: bool) -> Result<Trivialization, HochError> {
    let h = &m.h;
    let mut cur = m.clone();
    let mut steps = Vec::new();
    for n in 3..=m.arity {
        let mn = cur.comps[n].clone();
        if mn.is_zero() {
            continue;
        }
        if !h.hdelta(&mn).is_zero() {
            return Err(HochError::Internal(format!("m_{n} is not a cocycle after killing lower stages")));
        }
        match solve_coboundary(h, &mn, harrison_only) {
            Some(p) => {
                cur = perturb_element(&cur, &p)?.element;
                if !cur.comps[n].is_zero() {
                    return Err(HochError::Internal(format!("stage {n} did not vanish")));
                }
                steps.push(p);
            }
            None => {
                let coh = if harrison_only { harrison(h, n, 2 - n as i64)? } else { hochschild_cohomology(h, n, 2 - n as i64) };
                let class = coh.class_of(h, &mn).ok_or_else(|| HochError::Internal("class".into()))?;
                return Ok(Trivialization::Obstruction { arity: n, cocycle: mn, class, steps });
            }
        }
    }
    Ok(Trivialization::Success { steps })
}

/// Result of symmetrization: the C∞ element and the perturbations used.
#[derive(Clone, Debug)]
pub struct Symmetrized {
    pub element: TwistingElement,
    pub steps: Vec<Perturbed>,
}

/// Makes every component vanish on shuffles by perturbations, stage by stage.
/// Fails with the first arity whose shuffle defect is not of the form δp on shuffles.
pub fn symmetrize_to_cinfty(m: &TwistingElement) -> Result<Result<Symmetrized, usize>, HochError> {
    let h = &m.h;
    if !h.is_commutative() {
        return Err(HochError::NotCommutative);
    }
    let mut cur = m.clone();
    let mut steps = Vec::new();
    for n in 3..=m.arity {
        if h.is_harrison(&cur.comps[n]) {
            continue;
        }
        let proj = |h: &Hochschild, f: &HochschildCochain| h.shuffle_defect(f);
        let Some(p) = solve_delta(h, &cur.comps[n], Some(&proj)) else {
            return Ok(Err(n));
        };
        let step = perturb_element(&cur, &p)?;
        cur = step.element.clone();
        if !h.is_harrison(&cur.comps[n]) {
            return Err(HochError::Internal(format!("stage {n} still has a shuffle defect")));
        }
        steps.push(step);
    }
    Ok(Ok(Symmetrized { element: cur, steps }))
}

/// Results of the structural identities on one triple of cochains.
#[derive(Clone, Debug, Default)]
pub struct IdentityReport {
    pub delta_squared: Report,
    pub steen0: Report,
    pub steen1: Report,
    pub hirsch: Report,
    pub pre_jacobi: Report,
    pub jacobi: Report,
    pub delta_is_bracket: Report,
}

impl IdentityReport {
    pub fn ok(&self) -> bool {
        [&self.delta_squared, &self.steen0, &self.steen1, &self.hirsch, &self.pre_jacobi, &self.jacobi, &self.delta_is_bracket].iter().all(|r| r.ok())
    }
}

fn sgn(e: i64) -> Scalar {
    Scalar::sign(e.rem_euclid(2) != 0)
}

/// Checks, with shifted degrees |f|, |g|, |h|:
/// δδf = 0; δ(f⌣g) = −δf⌣g − (−1)^{|f|} f⌣δg;
/// δ(f{g}) = δf{g} + (−1)^{|f|} f{δg} − f⌣g − (−1)^{|f||g|} g⌣f;
/// (f⌣g){h} = f⌣(g{h}) + (−1)^{|g||h|} (f{h})⌣g;
/// f{g}{h} − f{g{h}} = f{g,h} + (−1)^{|g||h|} f{h,g};
/// the graded Jacobi identity for [ , ]; and δf = [μ, f].
pub fn check_identities(hh: &Hochschild, f: &HochschildCochain, g: &HochschildCochain, h: &HochschildCochain) -> IdentityReport {
    let (a, b, c) = (f.sdegree(), g.sdegree(), h.sdegree());
    let mut r = IdentityReport::default();
    let d = |x: &HochschildCochain| hh.hdelta(x);
    r.delta_squared.record(!d(&d(f)).is_zero(), || "δδf".into());

    let lhs = d(&hh.cup(f, g));
    let rhs = hh.cup(&d(f), g).scaled(&sgn(1)).plus(&hh.cup(f, &d(g)).scaled(&sgn(a + 1)));
    r.steen0.record(lhs != rhs, || "δ(f⌣g)".into());

    let lhs = d(&hh.cup1(f, g));
    let rhs = hh
        .cup1(&d(f), g)
        .plus(&hh.cup1(f, &d(g)).scaled(&sgn(a)))
        .plus(&hh.cup(f, g).scaled(&sgn(1)))
        .plus(&hh.cup(g, f).scaled(&sgn(a * b + 1)));
    r.steen1.record(lhs != rhs, || "δ(f⌣₁g)".into());

    let lhs = hh.cup1(&hh.cup(f, g), h);
    let rhs = hh.cup(f, &hh.cup1(g, h)).plus(&hh.cup(&hh.cup1(f, h), g).scaled(&sgn(b * c)));
    r.hirsch.record(lhs != rhs, || "(f⌣g)⌣₁h".into());

    let lhs = hh.cup1(&hh.cup1(f, g), h).minus(&hh.cup1(f, &hh.cup1(g, h)));
    let rhs = hh.brace(f, &[g, h]).unwrap().plus(&hh.brace(f, &[h, g]).unwrap().scaled(&sgn(b * c)));
    r.pre_jacobi.record(lhs != rhs, || "associator of ⌣₁".into());

    let br = |x: &HochschildCochain, y: &HochschildCochain| hh.bracket(x, y);
    let lhs = br(f, &br(g, h));
    let rhs = br(&br(f, g), h).plus(&br(g, &br(f, h)).scaled(&sgn(a * b)));
    r.jacobi.record(lhs != rhs, || "Jacobi".into());

    r.delta_is_bracket.record(d(f) != br(&hh.mu_cochain(), f), || "δf = [μ,f]".into());
    r
}
