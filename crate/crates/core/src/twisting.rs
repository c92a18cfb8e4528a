//! Twisting cochains K → A from a coaugmented dg coalgebra into a dg or A∞
//! algebra: the twisting condition, twisted tensor products, perturbation and
//! equivalence, the induced maps into the bar construction and out of the
//! cobar construction, and lifting along weak equivalences.
//!
//! A twisting cochain φ has degree +1, vanishes on the coaugmentation and
//! satisfies φ d_K = Σ_{i≥1} b_i(φ⊗…⊗φ)Δ̄^i, with b_i the shifted operations
//! of the target. For a dg algebra this reads d_Aφ − φd_K = φ⌣φ with the
//! Koszul cup (φ⌣ψ)(k) = Σ (−1)^{|k'|} φ(k')ψ(k''). It is exactly the
//! condition for Σ_i φ^{⊗i}Δ̄^i to commute with the bar differential.
//!
//! φ ∼_c ψ means f_ψ − f_φ = d_B D(c) + D(c) d_K, that is
//! ψ = φ + b_1c + c d_K + Σ_{i≥2} Σ_j ± b_i(ψ^{⊗j} ⊗ c ⊗ φ^{⊗(i−j−1)})Δ̄^i,
//! the sign being the Koszul sign of c (odd after the shift) passing k_1..k_j.

use crate::ainfty::{pad, AInfinity, Comps, Morphism, Report};
use crate::barcobar::{bar_construction, coaugmentation, deconcatenate, BarComplex, BarError, CobarComplex};
use crate::complexes::{homology, ChainComplex, DgAlgebra, DgCoalgebra, HomologyData};
use crate::exactlin::{Echelon, Lin, Matrix, Scalar, Vector};
use crate::graded::{tensor_module_indexed, tensor_vectors, GradedModule, MultiOp, Tensor, Word};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwistError {
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("the twisting condition fails: {0}")]
    NotTwisting(String),
    #[error("the dg coalgebra has no coaugmentation")]
    NoCoaugmentation,
    #[error("dependency cycle in the coalgebra; no inductive order exists")]
    NoOrder,
    #[error("target must be a dg algebra (m_n = 0 for n ≥ 3)")]
    NotDga,
    #[error("not a weak equivalence: {0}")]
    NotWeakEquivalence(String),
    #[error("no solution at {0}")]
    Unsolvable(String),
    #[error("module: {0}")]
    Module(String),
    #[error(transparent)]
    Bar(#[from] BarError),
}

/// Coaugmented dg coalgebra by structure constants. `exact[k]` records whether
/// d and Δ are known exactly on k (false near a truncation edge).
#[derive(Clone, Debug)]
pub struct Coalgebra {
    pub module: GradedModule,
    pub d: Matrix,
    pub diag: Vec<Tensor>,
    pub coaug: usize,
    pub exact: Vec<bool>,
}

impl Coalgebra {
    pub fn from_dg(c: &DgCoalgebra) -> Result<Coalgebra, TwistError> {
        let coaug = coaugmentation(c).ok_or(TwistError::NoCoaugmentation)?;
        let n = c.module().dim();
        Ok(Coalgebra { module: c.module().clone(), d: c.complex.d.clone(), diag: c.comul.clone(), coaug, exact: vec![true; n] })
    }

    /// Truncated bar construction with deconcatenation; exact below the top degree.
    pub fn from_bar(bar: &BarComplex) -> Coalgebra {
        let wc = &bar.words;
        let m = wc.complex.module.clone();
        let diag = wc
            .words
            .iter()
            .map(|w| deconcatenate(w).iter().map(|((a, b), c)| (vec![wc.index[a], wc.index[b]], c.clone())).collect())
            .collect();
        let exact = (0..m.dim()).map(|i| m.degree(i) < wc.max_degree).collect();
        Coalgebra { d: wc.complex.d.clone(), diag, coaug: wc.index[&vec![]], exact, module: m }
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    /// Δ̄(k): the diagonal without terms involving the coaugmentation.
    pub fn reduced_diag(&self, k: usize) -> Tensor {
        self.diag[k].iter().filter(|(w, _)| !w.contains(&self.coaug)).map(|(w, c)| (w.clone(), c.clone())).collect()
    }

    /// Δ̄^i(k) for i = 1, 2, … until it vanishes; index 0 is empty.
    pub fn iterated(&self, k: usize) -> Vec<Tensor> {
        let mut out = vec![Tensor::new()];
        if k == self.coaug {
            return out;
        }
        let mut cur = Tensor::single(vec![k], Scalar::int(1));
        while !cur.is_zero() {
            out.push(cur.clone());
            let mut next = Tensor::new();
            for (w, c) in cur.iter() {
                let last = *w.last().unwrap();
                for (p, e) in self.reduced_diag(last).iter() {
                    let mut w2 = w[..w.len() - 1].to_vec();
                    w2.extend_from_slice(p);
                    next.add_term(w2, &(c * e));
                }
            }
            cur = next;
        }
        out
    }

    fn deps(&self, k: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.d.column(k).keys().copied().collect();
        for (w, _) in self.reduced_diag(k).iter() {
            out.extend_from_slice(w);
        }
        out.retain(|&j| j != self.coaug);
        out
    }

    /// Basis elements grouped so that each depends (through d and Δ̄) only on
    /// earlier groups. Elements whose dependencies reach an inexact element are
    /// left out.
    pub fn levels(&self) -> Result<Vec<Vec<usize>>, TwistError> {
        let n = self.dim();
        let mut level: Vec<Option<Option<usize>>> = vec![None; n];
        let mut on_stack = vec![false; n];
        fn visit(c: &Coalgebra, k: usize, level: &mut Vec<Option<Option<usize>>>, on_stack: &mut Vec<bool>) -> Result<Option<usize>, TwistError> {
            if let Some(l) = level[k] {
                return Ok(l);
            }
            if on_stack[k] {
                return Err(TwistError::NoOrder);
            }
            on_stack[k] = true;
            let mut l = if c.exact[k] { Some(0) } else { None };
            for j in c.deps(k) {
                let lj = visit(c, j, level, on_stack)?;
                l = match (l, lj) {
                    (Some(a), Some(b)) => Some(a.max(b + 1)),
                    _ => None,
                };
            }
            on_stack[k] = false;
            level[k] = Some(l);
            Ok(l)
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for k in 0..n {
            if k == self.coaug {
                continue;
            }
            if let Some(l) = visit(self, k, &mut level, &mut on_stack)? {
                if groups.len() <= l {
                    groups.resize(l + 1, vec![]);
                }
                groups[l].push(k);
            }
        }
        Ok(groups)
    }

    /// Basis elements whose whole dependency closure is exact.
    pub fn reachable(&self) -> Result<Vec<bool>, TwistError> {
        let mut r = vec![false; self.dim()];
        for g in self.levels()? {
            for k in g {
                r[k] = true;
            }
        }
        Ok(r)
    }
}

/// A degree-`degree` linear map K → A as a matrix (columns indexed by K).
#[derive(Clone, Debug)]
pub struct TwistingCochain {
    pub source: Coalgebra,
    pub target: AInfinity,
    pub map: Matrix,
}

/// Values of maps on the factors of Δ̄^i words, with an optional odd map at one position.
fn pattern(b: &Comps, words: &[Tensor], kdeg: &GradedModule, left: &Matrix, mid: Option<&Matrix>, right: &Matrix, imin: usize) -> Vector {
    let mut out = Vector::new();
    for (i, t) in words.iter().enumerate().skip(imin.max(1)) {
        let Some(op) = b.get(i) else { break };
        for (w, c) in t.iter() {
            match mid {
                None => {
                    let vs: Vec<Vector> = w.iter().map(|&k| left.column(k).clone()).collect();
                    out.add_scaled(&op.eval_tensor(&tensor_vectors(&vs)), c);
                }
                Some(mm) => {
                    let mut pre = 0i64;
                    for j in 0..w.len() {
                        let vs: Vec<Vector> = w
                            .iter()
                            .enumerate()
                            .map(|(l, &k)| match l.cmp(&j) {
                                std::cmp::Ordering::Less => left.column(k).clone(),
                                std::cmp::Ordering::Equal => mm.column(k).clone(),
                                std::cmp::Ordering::Greater => right.column(k).clone(),
                            })
                            .collect();
                        let s = Scalar::sign(pre % 2 != 0);
                        out.add_scaled(&op.eval_tensor(&tensor_vectors(&vs)), &(c * &s));
                        pre += kdeg.degree(w[j]);
                    }
                }
            }
        }
    }
    out
}

fn shifted_ops(a: &AInfinity, n: usize) -> Comps {
    pad(&a.shifted(), n, |_| 1)
}

impl TwistingCochain {
    pub fn new(source: Coalgebra, target: AInfinity, map: Matrix) -> Result<TwistingCochain, TwistError> {
        if (map.rows, map.cols) != (target.module.dim(), source.dim()) {
            return Err(TwistError::Degree("matrix shape".into()));
        }
        for k in 0..source.dim() {
            for (i, _) in map.column(k).iter() {
                if target.module.degree(*i) != source.module.degree(k) + 1 {
                    return Err(TwistError::Degree(format!("{} ↦ {}", source.module.name(k), target.module.name(*i))));
                }
            }
        }
        if !map.column(source.coaug).is_zero() {
            return Err(TwistError::Degree("nonzero on the coaugmentation".into()));
        }
        Ok(TwistingCochain { source, target, map })
    }

    pub fn zero(source: Coalgebra, target: AInfinity) -> TwistingCochain {
        let map = Matrix::zero(target.module.dim(), source.dim());
        TwistingCochain { source, target, map }
    }

    fn b(&self) -> Comps {
        let n = self.target.truncation.max(1);
        shifted_ops(&self.target, n)
    }

    pub fn apply(&self, k: usize) -> &Vector {
        self.map.column(k)
    }
}

/// φ d_K = Σ_{i≥1} b_i(φ⊗…⊗φ)Δ̄^i on every basis element with exact dependencies.
pub fn check_ainf_tw(phi: &TwistingCochain) -> Report {
    let k = &phi.source;
    let b = phi.b();
    let mut rep = Report::default();
    let reach = match k.reachable() {
        Ok(r) => r,
        Err(e) => {
            rep.record(true, || e.to_string());
            return rep;
        }
    };
    for x in 0..k.dim() {
        if !reach[x] {
            continue;
        }
        let lhs = phi.map.apply(k.d.column(x));
        let rhs = pattern(&b, &k.iterated(x), &k.module, &phi.map, None, &phi.map, 1);
        rep.record(lhs != rhs, || format!("at {}", k.module.name(x)));
    }
    rep
}

fn require_dga(a: &AInfinity) -> Result<(), TwistError> {
    if a.ops.iter().skip(3).any(|op| !op.is_zero()) {
        return Err(TwistError::NotDga);
    }
    Ok(())
}

fn m1_vec(a: &AInfinity, v: &Vector) -> Vector {
    a.m(1).map(|m| m.eval_tensor(&v.map_keys(|i| vec![*i]))).unwrap_or_default()
}

fn m2_vec(a: &AInfinity, x: &Vector, y: &Vector) -> Vector {
    a.m(2).map(|m| m.eval_tensor(&tensor_vectors(&[x.clone(), y.clone()]))).unwrap_or_default()
}

/// Classical form for a dg algebra target: d_Aφ − φd_K = Σ (−1)^{|k'|} φ(k')φ(k'').
pub fn check_brown(phi: &TwistingCochain) -> Result<Report, TwistError> {
    require_dga(&phi.target)?;
    let k = &phi.source;
    let reach = k.reachable()?;
    let mut rep = Report::default();
    for x in 0..k.dim() {
        if !reach[x] {
            continue;
        }
        let mut lhs = m1_vec(&phi.target, phi.apply(x));
        lhs.sub_assign(&phi.map.apply(k.d.column(x)));
        let mut rhs = Vector::new();
        for (w, c) in k.reduced_diag(x).iter() {
            let s = Scalar::sign(k.module.degree(w[0]) % 2 != 0);
            rhs.add_scaled(&m2_vec(&phi.target, phi.apply(w[0]), phi.apply(w[1])), &(c * &s));
        }
        rep.record(lhs != rhs, || format!("at {}", k.module.name(x)));
    }
    Ok(rep)
}

/// Left dg module over a dg algebra with action ν(a, m).
#[derive(Clone, Debug)]
pub struct DgModule {
    pub complex: ChainComplex,
    pub action: MultiOp,
}

impl DgModule {
    pub fn new(algebra: &AInfinity, complex: ChainComplex, action: MultiOp) -> Result<DgModule, TwistError> {
        let m = DgModule { complex, action };
        m.validate(algebra)?;
        Ok(m)
    }

    pub fn regular(a: &DgAlgebra) -> DgModule {
        DgModule { complex: a.complex.clone(), action: a.mul.clone() }
    }

    pub fn act(&self, a: &Vector, m: &Vector) -> Vector {
        self.action.eval_tensor(&tensor_vectors(&[a.clone(), m.clone()]))
    }

    fn validate(&self, alg: &AInfinity) -> Result<(), TwistError> {
        let am = &alg.module;
        let mm = &self.complex.module;
        for a in 0..am.dim() {
            for x in 0..mm.dim() {
                let (va, vx) = (Vector::unit(a), Vector::unit(x));
                let lhs = self.complex.d.apply(&self.act(&va, &vx));
                let mut rhs = self.act(&m1_vec(alg, &va), &vx);
                let s = Scalar::sign(am.degree(a) % 2 != 0);
                rhs.add_scaled(&self.act(&va, &self.complex.d.apply(&vx)), &s);
                if lhs != rhs {
                    return Err(TwistError::Module(format!("Leibniz fails on {}·{}", am.name(a), mm.name(x))));
                }
                for b in 0..am.dim() {
                    let l = self.act(&m2_vec(alg, &va, &Vector::unit(b)), &vx);
                    let r = self.act(&va, &self.act(&Vector::unit(b), &vx));
                    if l != r {
                        return Err(TwistError::Module(format!("action not associative on {}, {}, {}", am.name(a), am.name(b), mm.name(x))));
                    }
                }
            }
        }
        Ok(())
    }
}

/// K ⊗_φ M with d_φ(k⊗m) = d_K k⊗m − (−1)^{|k|} k⊗d_M m + Σ (−1)^{|k'|} k'⊗φ(k'')m.
#[derive(Clone, Debug)]
pub struct TwistedTensor {
    pub complex: ChainComplex,
    /// Basis element → (index in K, index in M).
    pub pairs: Vec<(usize, usize)>,
    pub index: BTreeMap<(usize, usize), usize>,
}

impl TwistedTensor {
    pub fn homology(&self) -> HomologyData {
        homology(&self.complex)
    }

    pub fn ranks(&self) -> BTreeMap<i64, usize> {
        self.homology().ranks()
    }
}

fn tensor_basis(k: &Coalgebra, m: &DgModule) -> (GradedModule, Vec<(usize, usize)>, BTreeMap<(usize, usize), usize>) {
    let (tm, pairs) = tensor_module_indexed(&k.module, &m.complex.module);
    let index = pairs.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    (tm, pairs, index)
}

/// Σ k'⊗ν(c(k''), m) over the full diagonal, with sign (−1)^{|k'|·|c|}.
fn cap(k: &Coalgebra, m: &DgModule, c: &Matrix, cdeg: i64, x: usize, y: usize, index: &BTreeMap<(usize, usize), usize>) -> Vector {
    let mut out = Vector::new();
    for (w, e) in k.diag[x].iter() {
        let cv = c.column(w[1]);
        if cv.is_zero() {
            continue;
        }
        let s = Scalar::sign(k.module.degree(w[0]) * cdeg % 2 != 0);
        for (j, v) in m.act(cv, &Vector::unit(y)).iter() {
            out.add_term(index[&(w[0], *j)], &(&(e * &s) * v));
        }
    }
    out
}

pub fn twisted_tensor(phi: &TwistingCochain, m: &DgModule) -> Result<TwistedTensor, TwistError> {
    require_dga(&phi.target)?;
    let k = &phi.source;
    if k.exact.iter().any(|e| !e) {
        return Err(TwistError::Degree("twisted tensor products need an untruncated coalgebra".into()));
    }
    let rep = check_brown(phi)?;
    if !rep.ok() {
        return Err(TwistError::NotTwisting(rep.violations.join("; ")));
    }
    let (tm, pairs, index) = tensor_basis(k, m);
    let mut d = Matrix::zero(tm.dim(), tm.dim());
    for (col, &(x, y)) in pairs.iter().enumerate() {
        let mut v = Vector::new();
        for (x2, c) in k.d.column(x).iter() {
            v.add_term(index[&(*x2, y)], c);
        }
        let s = -Scalar::sign(k.module.degree(x) % 2 != 0);
        for (y2, c) in m.complex.d.column(y).iter() {
            v.add_term(index[&(x, *y2)], &(c * &s));
        }
        v.add_assign(&cap(k, m, &phi.map, 1, x, y, &index));
        d.set_column(col, v);
    }
    let complex = ChainComplex::new(tm, d).map_err(|e| TwistError::NotTwisting(e.to_string()))?;
    Ok(TwistedTensor { complex, pairs, index })
}

/// Solves the equivalence relation for ψ given φ and a degree-0 map c vanishing
/// on the coaugmentation; ψ agrees with φ below the support of c.
pub fn perturb(phi: &TwistingCochain, c: &Matrix) -> Result<TwistingCochain, TwistError> {
    let k = &phi.source;
    check_c(phi, c)?;
    let b = phi.b();
    let mut psi = phi.map.clone();
    for group in k.levels()? {
        for &x in &group {
            let mut v = phi.map.column(x).clone();
            v.add_assign(&m1_vec(&phi.target, c.column(x)));
            v.add_assign(&c.apply(k.d.column(x)));
            v.add_assign(&pattern(&b, &k.iterated(x), &k.module, &psi, Some(c), &phi.map, 2));
            psi.set_column(x, v);
        }
    }
    Ok(TwistingCochain { source: k.clone(), target: phi.target.clone(), map: psi })
}

fn check_c(phi: &TwistingCochain, c: &Matrix) -> Result<(), TwistError> {
    let k = &phi.source;
    if (c.rows, c.cols) != (phi.map.rows, phi.map.cols) {
        return Err(TwistError::Degree("shape of c".into()));
    }
    for x in 0..k.dim() {
        for (i, _) in c.column(x).iter() {
            if phi.target.module.degree(*i) != k.module.degree(x) {
                return Err(TwistError::Degree(format!("c on {}", k.module.name(x))));
            }
        }
    }
    if !c.column(k.coaug).is_zero() {
        return Err(TwistError::Degree("c must vanish on the coaugmentation".into()));
    }
    Ok(())
}

/// Whether φ ∼_c ψ holds on every reachable exact basis element.
pub fn ainf_equivalence(phi: &TwistingCochain, psi: &TwistingCochain, c: &Matrix) -> Result<Report, TwistError> {
    check_c(phi, c)?;
    let k = &phi.source;
    let b = phi.b();
    let reach = k.reachable()?;
    let mut rep = Report::default();
    for x in 0..k.dim() {
        if !reach[x] {
            continue;
        }
        let mut lhs = psi.map.column(x).clone();
        lhs.sub_assign(phi.map.column(x));
        let mut rhs = m1_vec(&phi.target, c.column(x));
        rhs.add_assign(&c.apply(k.d.column(x)));
        rhs.add_assign(&pattern(&b, &k.iterated(x), &k.module, &psi.map, Some(c), &phi.map, 2));
        rep.record(lhs != rhs, || format!("at {}", k.module.name(x)));
    }
    Ok(rep)
}

/// Σ_{Δ̄k} c(k')·c'(k'') style product of two degree-0 maps into a dg algebra.
fn cup0(k: &Coalgebra, a: &AInfinity, c1: &Matrix, c2: &Matrix, x: usize) -> Vector {
    let mut out = Vector::new();
    for (w, e) in k.reduced_diag(x).iter() {
        out.add_scaled(&m2_vec(a, c1.column(w[0]), c2.column(w[1])), e);
    }
    out
}

/// F_c(k⊗m) = k⊗m + Σ k'⊗c(k'')m, from K⊗_φM to K⊗_ψM where ψ = perturb(φ, c).
pub fn twisted_iso(phi: &TwistingCochain, c: &Matrix, m: &DgModule) -> Result<Matrix, TwistError> {
    require_dga(&phi.target)?;
    check_c(phi, c)?;
    let k = &phi.source;
    let (tm, pairs, index) = tensor_basis(k, m);
    let mut f = Matrix::identity(tm.dim());
    for (col, &(x, y)) in pairs.iter().enumerate() {
        f.set_column(col, {
            let mut v = Vector::unit(col);
            v.add_assign(&cap(k, m, c, 0, x, y, &index));
            v
        });
    }
    Ok(f)
}

/// The c' with c + c' + c'⌣c = 0, solved inductively; F_{c'} inverts F_c.
pub fn inverse_c(phi: &TwistingCochain, c: &Matrix) -> Result<Matrix, TwistError> {
    require_dga(&phi.target)?;
    let k = &phi.source;
    let mut c2 = Matrix::zero(c.rows, c.cols);
    for group in k.levels()? {
        for &x in &group {
            let mut v = c.column(x).scaled(&Scalar::int(-1));
            v.sub_assign(&cup0(k, &phi.target, &c2, c, x));
            c2.set_column(x, v);
        }
    }
    Ok(c2)
}

/// The c'' with φ ∼_{c''} φ'' when φ ∼_c φ' and φ' ∼_{c'} φ'' (dg algebra target).
pub fn compose_c(phi: &TwistingCochain, c: &Matrix, c2: &Matrix) -> Result<Matrix, TwistError> {
    require_dga(&phi.target)?;
    let k = &phi.source;
    let mut out = c.add(c2);
    for x in 0..k.dim() {
        let v = cup0(k, &phi.target, c2, c, x);
        for (i, e) in v.iter() {
            out.add_entry(*i, x, e);
        }
    }
    Ok(out)
}

/// Images of basis elements in the bar construction of the target, as words
/// over its non-unit basis.
#[derive(Clone, Debug)]
pub struct BarValued {
    pub bar: BarComplex,
    /// Target basis index → bar letter.
    pub letter: BTreeMap<usize, usize>,
    pub values: Vec<Tensor>,
}

fn bar_letters(target: &AInfinity, max_degree: i64) -> Result<(BarComplex, BTreeMap<usize, usize>), TwistError> {
    let bar = bar_construction(target, max_degree)?;
    let letter: BTreeMap<usize, usize> = (0..target.module.dim()).filter(|&i| Some(i) != target.unit).enumerate().map(|(k, i)| (i, k)).collect();
    Ok((bar, letter))
}

fn letters_of(v: &Vector, letter: &BTreeMap<usize, usize>) -> Result<Vector, TwistError> {
    v.iter()
        .map(|(i, c)| letter.get(i).map(|&l| (l, c.clone())).ok_or_else(|| TwistError::Degree("value hits the unit".into())))
        .collect()
}

/// f_φ = Σ_i (φ⊗…⊗φ)Δ̄^i : K → BA, with f_φ(coaugmentation) = [ ].
pub fn induced_coalgebra_map(phi: &TwistingCochain, max_degree: i64) -> Result<BarValued, TwistError> {
    let (bar, letter) = bar_letters(&phi.target, max_degree)?;
    let k = &phi.source;
    let mut values = Vec::new();
    for x in 0..k.dim() {
        if x == k.coaug {
            values.push(Tensor::single(vec![], Scalar::int(1)));
            continue;
        }
        let mut t = Tensor::new();
        for words in k.iterated(x).iter().skip(1) {
            for (w, c) in words.iter() {
                let vs = w.iter().map(|&y| letters_of(phi.map.column(y), &letter)).collect::<Result<Vec<_>, _>>()?;
                t.add_scaled(&tensor_vectors(&vs), c);
            }
        }
        values.push(t);
    }
    Ok(BarValued { bar, letter, values })
}

impl BarValued {
    fn apply(&self, v: &Vector) -> Tensor {
        let mut out = Tensor::new();
        for (i, c) in v.iter() {
            out.add_scaled(&self.values[*i], c);
        }
        out
    }

    /// d_B f = f d_K on exact elements.
    pub fn check_chain_map(&self, k: &Coalgebra) -> Report {
        let mut rep = Report::default();
        for x in 0..k.dim() {
            if !k.exact[x] {
                continue;
            }
            let lhs = self.bar.d_tensor(&self.values[x]);
            let rhs = self.apply(k.d.column(x));
            rep.record(lhs != rhs, || format!("at {}", k.module.name(x)));
        }
        rep
    }

    /// Δ_B f = (f⊗f)Δ_K.
    pub fn check_coalgebra_map(&self, k: &Coalgebra) -> Report {
        let mut rep = Report::default();
        for x in 0..k.dim() {
            let mut lhs: Lin<(Word, Word)> = Lin::new();
            for (w, c) in self.values[x].iter() {
                lhs.add_scaled(&deconcatenate(w), c);
            }
            let mut rhs: Lin<(Word, Word)> = Lin::new();
            for (w, c) in k.diag[x].iter() {
                for (a, ca) in self.values[w[0]].iter() {
                    for (b, cb) in self.values[w[1]].iter() {
                        rhs.add_term((a.clone(), b.clone()), &(&(c * ca) * cb));
                    }
                }
            }
            rep.record(lhs != rhs, || format!("at {}", k.module.name(x)));
        }
        rep
    }

    /// p∘f: the length-one part, as a map into the target.
    pub fn project(&self, target_dim: usize) -> Matrix {
        let back: BTreeMap<usize, usize> = self.letter.iter().map(|(i, l)| (*l, *i)).collect();
        let cols = self
            .values
            .iter()
            .map(|t| t.iter().filter(|(w, _)| w.len() == 1).map(|(w, c)| (back[&w[0]], c.clone())).collect())
            .collect();
        Matrix::from_columns(target_dim, cols)
    }
}

/// D(c) = Σ_{i,j} ±(ψ^{⊗j} ⊗ c ⊗ φ^{⊗(i−j−1)})Δ̄^i : K → BA.
pub fn equivalence_homotopy(phi: &TwistingCochain, psi: &TwistingCochain, c: &Matrix, max_degree: i64) -> Result<BarValued, TwistError> {
    check_c(phi, c)?;
    let (bar, letter) = bar_letters(&phi.target, max_degree)?;
    let k = &phi.source;
    let lv = |m: &Matrix, y: usize| letters_of(m.column(y), &letter);
    let mut values = Vec::new();
    for x in 0..k.dim() {
        let mut t = Tensor::new();
        for words in k.iterated(x).iter().skip(1) {
            for (w, e) in words.iter() {
                let mut pre = 0i64;
                for j in 0..w.len() {
                    let mut vs = Vec::new();
                    for (l, &y) in w.iter().enumerate() {
                        vs.push(match l.cmp(&j) {
                            std::cmp::Ordering::Less => lv(&psi.map, y)?,
                            std::cmp::Ordering::Equal => lv(c, y)?,
                            std::cmp::Ordering::Greater => lv(&phi.map, y)?,
                        });
                    }
                    t.add_scaled(&tensor_vectors(&vs), &(e * &Scalar::sign(pre % 2 != 0)));
                    pre += k.module.degree(w[j]);
                }
            }
        }
        values.push(t);
    }
    Ok(BarValued { bar, letter, values })
}

/// f_ψ − f_φ = d_B D + D d_K, and Δ_B D = (f_ψ⊗D + D⊗f_φ)Δ_K.
pub fn check_equivalence_homotopy(k: &Coalgebra, f_phi: &BarValued, f_psi: &BarValued, dc: &BarValued) -> (Report, Report) {
    let mut hom = Report::default();
    let mut coder = Report::default();
    for x in 0..k.dim() {
        if k.exact[x] {
            let mut lhs = f_psi.values[x].clone();
            lhs.sub_assign(&f_phi.values[x]);
            let mut rhs = dc.bar.d_tensor(&dc.values[x]);
            rhs.add_assign(&dc.apply(k.d.column(x)));
            hom.record(lhs != rhs, || format!("homotopy at {}", k.module.name(x)));
        }
        let mut lhs: Lin<(Word, Word)> = Lin::new();
        for (w, c) in dc.values[x].iter() {
            lhs.add_scaled(&deconcatenate(w), c);
        }
        let mut rhs: Lin<(Word, Word)> = Lin::new();
        for (w, c) in k.diag[x].iter() {
            let s = Scalar::sign(k.module.degree(w[0]) % 2 != 0);
            for (a, ca) in f_psi.values[w[0]].iter() {
                for (b, cb) in dc.values[w[1]].iter() {
                    rhs.add_term((a.clone(), b.clone()), &(&(&(c * ca) * cb) * &s));
                }
            }
            for (a, ca) in dc.values[w[0]].iter() {
                for (b, cb) in f_phi.values[w[1]].iter() {
                    rhs.add_term((a.clone(), b.clone()), &(&(c * ca) * cb));
                }
            }
        }
        coder.record(lhs != rhs, || format!("coderivation at {}", k.module.name(x)));
    }
    (hom, coder)
}

/// g_φ: ΩK → A on cobar words, [k₁|…|k_n] ↦ φ(k₁)⋯φ(k_n).
pub fn induced_algebra_map(phi: &TwistingCochain, cobar: &CobarComplex) -> Result<Vec<Vector>, TwistError> {
    require_dga(&phi.target)?;
    let unit = phi.target.unit.map(Vector::unit).ok_or(TwistError::NotDga)?;
    let mut out = Vec::new();
    for w in &cobar.words.words {
        let mut v = unit.clone();
        for &l in w {
            v = m2_vec(&phi.target, &v, phi.map.column(cobar.letter_of[l]));
        }
        out.push(v);
    }
    Ok(out)
}

/// g d_Ω = d_A g on every cobar word in the window.
pub fn check_algebra_map(phi: &TwistingCochain, cobar: &CobarComplex, g: &[Vector]) -> Report {
    let mut rep = Report::default();
    for (i, w) in cobar.words.words.iter().enumerate() {
        let lhs = m1_vec(&phi.target, &g[i]);
        let mut rhs = Vector::new();
        for (w2, c) in cobar.d_word(w).iter() {
            let mut v = phi.target.unit.map(Vector::unit).unwrap_or_default();
            for &l in w2 {
                v = m2_vec(&phi.target, &v, phi.map.column(cobar.letter_of[l]));
            }
            rhs.add_scaled(&v, c);
        }
        rep.record(lhs != rhs, || format!("at {}", cobar.words.complex.module.name(i)));
    }
    rep
}

/// Truncated cobar construction as a target: m₁ = d_Ω, m₂ = concatenation,
/// products leaving the window dropped.
pub fn cobar_target(cobar: &CobarComplex) -> AInfinity {
    let wc = &cobar.words;
    let m = wc.complex.module.clone();
    let mut a = AInfinity::new(m.clone(), 2);
    for j in 0..m.dim() {
        a.ops[1].set(vec![j], wc.complex.d.column(j).clone());
    }
    for (i, u) in wc.words.iter().enumerate() {
        for (j, v) in wc.words.iter().enumerate() {
            let mut w = u.clone();
            w.extend_from_slice(v);
            if let Some(&k) = wc.index.get(&w) {
                a.ops[2].set(vec![i, j], Vector::unit(k));
            }
        }
    }
    a.unit = Some(wc.index[&vec![]]);
    a
}

/// The universal twisting cochain i: K → ΩK, k ↦ [k].
pub fn universal_inclusion(k: &DgCoalgebra, cobar: &CobarComplex) -> Result<TwistingCochain, TwistError> {
    let kc = Coalgebra::from_dg(k)?;
    let target = cobar_target(cobar);
    let mut map = Matrix::zero(target.module.dim(), kc.dim());
    for (l, &x) in cobar.letter_of.iter().enumerate() {
        if let Some(&i) = cobar.words.index.get(&vec![l]) {
            map.set_column(x, Vector::unit(i));
        }
    }
    TwistingCochain::new(kc, target, map)
}

/// The universal twisting cochain p: BA → A, [a] ↦ a.
pub fn universal_projection(a: &AInfinity, max_degree: i64) -> Result<TwistingCochain, TwistError> {
    let (bar, letter) = bar_letters(a, max_degree)?;
    let kc = Coalgebra::from_bar(&bar);
    let mut map = Matrix::zero(a.module.dim(), kc.dim());
    for (&i, &l) in &letter {
        if let Some(&x) = bar.words.index.get(&vec![l]) {
            map.set_column(x, Vector::unit(i));
        }
    }
    TwistingCochain::new(kc, a.clone(), map)
}

/// Result of lifting a twisting cochain along a weak equivalence f: M → M'.
#[derive(Clone, Debug)]
pub struct Lift {
    pub psi: TwistingCochain,
    /// Successive perturbations (c'_n, φ after perturbing by c'_n).
    pub stages: Vec<(Matrix, TwistingCochain)>,
    /// The final perturbed cochain, equal to f∘ψ.
    pub pushed: TwistingCochain,
}

/// f∘ψ = Σ_i f_i(ψ⊗…⊗ψ)Δ̄^i.
pub fn push_forward(f: &Morphism, psi: &TwistingCochain) -> TwistingCochain {
    let ff = pad(&f.shifted(), f.truncation, |_| 0);
    let k = &psi.source;
    let cols = (0..k.dim()).map(|x| pattern(&ff, &k.iterated(x), &k.module, &psi.map, None, &psi.map, 1)).collect();
    TwistingCochain { source: k.clone(), target: f.target.clone(), map: Matrix::from_columns(f.target.module.dim(), cols) }
}

fn m1_complex(a: &AInfinity) -> ChainComplex {
    let n = a.module.dim();
    let mut d = Matrix::zero(n, n);
    if let Some(m1) = a.m(1) {
        for (w, v) in &m1.table {
            d.set_column(w[0], v.clone());
        }
    }
    ChainComplex::new(a.module.clone(), d).expect("m_1 squares to zero")
}

/// Lifts φ: K → M' to ψ: K → M with f∘ψ equivalent to φ, stage by stage.
pub fn lift_twisting(phi: &TwistingCochain, f: &Morphism) -> Result<Lift, TwistError> {
    let k = &phi.source;
    let (src, tgt) = (&f.source, &f.target);
    let (hs, ht) = (homology(&m1_complex(src)), homology(&m1_complex(tgt)));
    let f1 = f.f1_matrix();
    let induced = ht.proj.compose(&f1.compose(&hs.f1));
    if induced.rows != induced.cols || induced.rank() != induced.rows {
        return Err(TwistError::NotWeakEquivalence("f₁ is not a homology isomorphism".into()));
    }
    let inv = Echelon::from_columns(induced.rows, induced.columns().to_vec());
    let f1_solver = Echelon::from_columns(f1.rows, f1.columns().to_vec());
    let b = pad(&src.shifted(), src.truncation.max(1), |_| 1);
    let ff = pad(&f.shifted(), f.truncation, |_| 0);
    let mut psi = Matrix::zero(src.module.dim(), k.dim());
    let mut cur = phi.clone();
    let mut stages = Vec::new();
    for group in k.levels()? {
        let mut c = Matrix::zero(tgt.module.dim(), k.dim());
        for &x in &group {
            let it = k.iterated(x);
            let mut u = psi.apply(k.d.column(x));
            u.sub_assign(&pattern(&b, &it, &k.module, &psi, None, &psi, 2));
            let higher = pattern(&ff, &it, &k.module, &psi, None, &psi, 2);
            // a direct lift of φ(x) when one exists keeps c'_x = 0
            let mut want = cur.map.column(x).clone();
            want.sub_assign(&higher);
            if let Some(y) = f1_solver.solve(&want) {
                if m1_vec(src, &y) == u {
                    psi.set_column(x, y);
                    continue;
                }
            }
            let name = || k.module.name(x).to_string();
            let bar_psi = hs.preimage(&u).ok_or_else(|| TwistError::Unsolvable(format!("m₁ψ = U at {}", name())))?;
            let mut zp = f1.apply(&bar_psi);
            zp.add_assign(&higher);
            zp.sub_assign(cur.map.column(x));
            let cls = inv.solve(&ht.proj.apply(&zp)).ok_or_else(|| TwistError::Unsolvable(format!("class at {}", name())))?;
            let z = hs.f1.apply(&cls);
            let mut bd = zp.clone();
            bd.sub_assign(&f1.apply(&z));
            let cp = ht.preimage(&bd).ok_or_else(|| TwistError::Unsolvable(format!("c' at {}", name())))?;
            let mut y = bar_psi;
            y.sub_assign(&z);
            psi.set_column(x, y);
            c.set_column(x, cp);
        }
        if !c.is_zero() {
            cur = perturb(&cur, &c)?;
            stages.push((c, cur.clone()));
        }
    }
    let psi = TwistingCochain { source: k.clone(), target: src.clone(), map: psi };
    Ok(Lift { psi, stages, pushed: cur })
}
