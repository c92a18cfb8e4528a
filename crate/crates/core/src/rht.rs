//! Rational-homotopy applications of minimal C∞ structures: indecomposables
//! of the bar construction and rational homotopy ranks, formality decisions,
//! the single-arity classification, and realizability of algebra maps.
//!
//! With bar letters in degree |a| − 1, the homology of QB in degree d is
//! π^{d+1}, the dual of π_{d+1}(X) ⊗ ℚ.

use crate::ainfty::{check_cinfty, check_cinfty_morphism, check_morphism, morphism_defect, toggle_shift, AInfinity, AinfError, Morphism};
use crate::barcobar::{bar_construction, deconcatenate, shuffle_words, BarComplex, BarError};
use crate::complexes::{homology, ChainComplex};
use crate::exactlin::{kernel_basis, quotient_with_section, Echelon, Lin, Matrix, QuotientData, Scalar, Vector};
use crate::graded::{GradedModule, MultiOp, Tensor, Word};
use crate::hochschild::{
    harrison, harrison_basis, solve_coboundary, symmetrize_to_cinfty, try_trivialize, try_trivialize_cinfty, HochError,
    Hochschild, HochschildCochain, TwistingElement, Trivialization,
};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RhtError {
    #[error("structure is not C∞: {0}")]
    NotCinfty(String),
    #[error("the shuffle span is not stable under the bar differential at {0}")]
    NotIdeal(String),
    #[error("map is not multiplicative: {0}")]
    NotMultiplicative(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Bar(#[from] BarError),
    #[error(transparent)]
    Hoch(#[from] HochError),
    #[error(transparent)]
    Ainf(#[from] AinfError),
}

/// QB: the bar complex modulo the span of shuffle products u∗v of nonempty words.
#[derive(Clone, Debug)]
pub struct Indecomposables {
    pub bar: BarComplex,
    pub complex: ChainComplex,
    /// A bar representative of each basis element of QB.
    pub section: Vec<Tensor>,
    pub max_degree: i64,
    quotient: QuotientData,
}

impl Indecomposables {
    /// Coordinates in QB of a bar element.
    pub fn project(&self, t: &Tensor) -> Vector {
        self.quotient.class_of(&self.bar.words.to_vector(t)).expect("every vector has a class")
    }

    /// Ranks of H(QB) in the degrees where the truncation is exact.
    pub fn homology_ranks(&self) -> BTreeMap<i64, usize> {
        let h = homology(&self.complex);
        (1..self.max_degree).map(|d| (d, h.rank(d))).collect()
    }

    /// Cobracket induced by Δ̄ − τΔ̄ on a basis element, as pairs of QB basis indices.
    pub fn cobracket(&self, j: usize) -> Lin<(usize, usize)> {
        let sd = self.bar.sd();
        let mut out = Lin::new();
        for (w, c) in self.section[j].iter() {
            for ((u, v), e) in deconcatenate(w).iter() {
                if u.is_empty() || v.is_empty() {
                    continue;
                }
                let pu = self.project(&Tensor::single(u.clone(), Scalar::int(1)));
                let pv = self.project(&Tensor::single(v.clone(), Scalar::int(1)));
                let du: i64 = u.iter().map(|&i| sd[i]).sum();
                let dv: i64 = v.iter().map(|&i| sd[i]).sum();
                let ce = c * e;
                let tw = &ce * &Scalar::sign(du * dv % 2 != 0);
                for (a, x) in pu.iter() {
                    for (b, y) in pv.iter() {
                        out.add_term((*a, *b), &(&(&ce * x) * y));
                        out.add_term((*b, *a), &-(&(&tw * x) * y));
                    }
                }
            }
        }
        out
    }
}

/// Builds QB after certifying that the shuffle span is a differential ideal.
pub fn indecomposables_qb(m: &AInfinity, max_degree: i64) -> Result<Indecomposables, RhtError> {
    let rep = check_cinfty(m);
    if !rep.ok() {
        return Err(RhtError::NotCinfty(rep.violations[0].clone()));
    }
    let bar = bar_construction(m, max_degree)?;
    let wc = &bar.words;
    let n = wc.complex.module.dim();
    let nonempty: Vec<&Word> = wc.words.iter().filter(|w| !w.is_empty()).collect();
    let mut shuffles = Vec::new();
    for u in &nonempty {
        for v in &nonempty {
            if wc.word_degree(u) + wc.word_degree(v) <= max_degree {
                let s = wc.to_vector(&shuffle_words(u, v, &wc.sd));
                if !s.is_zero() {
                    shuffles.push((wc.word_degree(u) + wc.word_degree(v), s));
                }
            }
        }
    }
    let span = Echelon::from_columns(n, shuffles.iter().map(|(_, s)| s.clone()));
    for (d, s) in &shuffles {
        if *d < max_degree && !span.contains(&wc.complex.d.apply(s)) {
            return Err(RhtError::NotIdeal(format!("degree {d}")));
        }
    }
    let all: Vec<Vector> = (0..n).map(Vector::unit).collect();
    let boundaries: Vec<Vector> = shuffles.into_iter().map(|(_, s)| s).collect();
    let quotient = quotient_with_section(n, &all, &boundaries).map_err(|e| RhtError::Precondition(e.to_string()))?;
    let reps: Vec<Vector> = quotient.section.columns().to_vec();
    let names = reps.iter().map(|v| {
        let d = wc.complex.module.vector_degree(v).expect("homogeneous representative");
        (wc.complex.module.format_vector(v), d)
    });
    let module = GradedModule::new(m.field(), names).map_err(|e| RhtError::Precondition(e.to_string()))?;
    let mut d = Matrix::zero(reps.len(), reps.len());
    for (j, v) in reps.iter().enumerate() {
        if module.degree(j) < max_degree {
            d.set_column(j, quotient.class_of(&wc.complex.d.apply(v)).expect("class"));
        }
    }
    let complex = ChainComplex::new(module, d).map_err(|e| RhtError::Precondition(e.to_string()))?;
    let section = reps.iter().map(|v| wc.to_tensor(v)).collect();
    Ok(Indecomposables { bar, complex, section, max_degree, quotient })
}

/// Ranks of π^k = H^{k−1}(QB) for 2 ≤ k ≤ max_degree.
pub fn rational_homotopy(m: &AInfinity, max_degree: i64) -> Result<BTreeMap<i64, usize>, RhtError> {
    let qb = indecomposables_qb(m, max_degree)?;
    Ok(qb.homology_ranks().into_iter().map(|(d, r)| (d + 1, r)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Formal,
    Nonformal,
    /// An obstruction was met along the greedy path only.
    Undecided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Criterion {
    /// Non-unit part in degrees [n, 3n − 2].
    Window { n: i64 },
    /// Non-unit part in odd degrees only.
    OddDegrees,
}

#[derive(Clone, Debug)]
pub enum Evidence {
    /// No cochain space C^{k,2−k} is nonzero for 3 ≤ k ≤ `arity`.
    Structural { criterion: Criterion, arity: usize },
    /// Harr^{k,2−k} = 0 for 3 ≤ k ≤ `arity`.
    HarrisonVanishing { arity: usize },
    /// Only C^{k,2−k} can be nonzero; m_k = δp (formal) or its class is nonzero.
    SingleArity { arity: usize, class: Vector, trivializer: Option<HochschildCochain> },
    /// Perturbations p_3, p_4, … that kill m.
    Trivialized { steps: Vec<HochschildCochain> },
    GreedyObstruction { arity: usize, class: Vector },
}

#[derive(Clone, Debug)]
pub struct FormalityReport {
    pub verdict: Verdict,
    pub evidence: Evidence,
}

fn nonunit_degrees(m: &AInfinity) -> Vec<i64> {
    (0..m.module.dim()).filter(|&i| Some(i) != m.unit).map(|i| m.module.degree(i)).collect()
}

fn arity_range(m: &AInfinity) -> usize {
    m.degree_bound().unwrap_or(m.truncation).max(m.truncation)
}

/// The C∞ form of m: m itself, or its symmetrization when it is not C∞.
fn cinfty_element(m: &AInfinity) -> Result<TwistingElement, RhtError> {
    let mut t = TwistingElement::from_ainfinity(m)?;
    let n_max = arity_range(m);
    while t.comps.len() <= n_max {
        let k = t.comps.len();
        t.comps.push(HochschildCochain::zero(k, 2 - k as i64));
    }
    t.arity = t.arity.max(n_max);
    if check_cinfty(m).ok() {
        return Ok(t);
    }
    match symmetrize_to_cinfty(&t)? {
        Ok(s) => Ok(s.element),
        Err(n) => Err(RhtError::NotCinfty(format!("shuffle defect at arity {n} cannot be removed"))),
    }
}

/// Arities 3 ≤ k ≤ N whose (Harrison, if commutative) cochain space C^{k,2−k} is nonzero.
fn live_arities(h: &Hochschild, n_max: usize) -> Vec<usize> {
    let comm = h.is_commutative();
    (3..=n_max)
        .filter(|&k| {
            let d = 2 - k as i64;
            if comm { !harrison_basis(h, k, d).1.is_empty() } else { !h.basis(k, d).is_empty() }
        })
        .collect()
}

/// Decides formality of a minimal structure on H: structural criteria first,
/// then vanishing of Harrison cohomology, then the single-arity decision, and
/// finally stage-wise trivialization.
pub fn formality(m: &AInfinity) -> Result<FormalityReport, RhtError> {
    let n_max = arity_range(m);
    let degs = nonunit_degrees(m);
    if let (Some(&lo), Some(&hi)) = (degs.iter().min(), degs.iter().max()) {
        if lo >= 2 {
            let h = Hochschild::from_ainfinity(m)?;
            let empty = (3..=n_max).all(|k| h.basis(k, 2 - k as i64).is_empty());
            if hi <= 3 * lo - 2 && empty {
                return Ok(FormalityReport { verdict: Verdict::Formal, evidence: Evidence::Structural { criterion: Criterion::Window { n: lo }, arity: n_max } });
            }
            if degs.iter().all(|d| d % 2 != 0) && empty {
                return Ok(FormalityReport { verdict: Verdict::Formal, evidence: Evidence::Structural { criterion: Criterion::OddDegrees, arity: n_max } });
            }
        }
    }
    let h = Hochschild::from_ainfinity(m)?;
    if !h.is_commutative() {
        let t = TwistingElement::from_ainfinity(m)?;
        return Ok(from_trivialization(try_trivialize(&t)?));
    }
    if (3..=n_max).try_fold(true, |acc, k| Ok::<_, RhtError>(acc && harrison(&h, k, 2 - k as i64)?.dim == 0))? {
        return Ok(FormalityReport { verdict: Verdict::Formal, evidence: Evidence::HarrisonVanishing { arity: n_max } });
    }
    let t = cinfty_element(m)?;
    let live = live_arities(&h, n_max);
    if let [k] = live[..] {
        let coh = harrison(&h, k, 2 - k as i64)?;
        let mk = &t.comps[k];
        let class = coh.class_of(&h, mk).ok_or_else(|| RhtError::Precondition(format!("m_{k} is not a cocycle")))?;
        if class.is_zero() {
            let p = solve_coboundary(&h, mk, true).ok_or_else(|| RhtError::Precondition("no trivializer for a zero class".into()))?;
            return Ok(FormalityReport { verdict: Verdict::Formal, evidence: Evidence::SingleArity { arity: k, class, trivializer: Some(p) } });
        }
        return Ok(FormalityReport { verdict: Verdict::Nonformal, evidence: Evidence::SingleArity { arity: k, class, trivializer: None } });
    }
    Ok(from_trivialization(try_trivialize_cinfty(&t)?))
}

fn from_trivialization(t: Trivialization) -> FormalityReport {
    match t {
        Trivialization::Success { steps } => FormalityReport { verdict: Verdict::Formal, evidence: Evidence::Trivialized { steps } },
        Trivialization::Obstruction { arity, class, .. } => {
            FormalityReport { verdict: Verdict::Undecided, evidence: Evidence::GreedyObstruction { arity, class } }
        }
    }
}

/// Orbits of minimal structures supported in a single arity k under C∞ isomorphism.
#[derive(Clone, Debug)]
pub struct SingleArity {
    pub arity: usize,
    /// Harr^{k,2−k}(H, H), in which the classes live.
    pub class_dim: usize,
    pub class: Vector,
    /// Degree-0 derivations of H (the Lie algebra of Aut H), as matrices on H.
    pub derivations: Vec<Matrix>,
    /// Their action on Harr^{k,2−k}.
    pub action: Vec<Matrix>,
    /// Number of orbits when the action decides it.
    pub orbit_count: Option<usize>,
}

impl SingleArity {
    /// Zero / nonzero: the orbit invariant whenever `orbit_count` is 2.
    pub fn is_trivial(&self) -> bool {
        self.class.is_zero()
    }

    pub fn same_orbit(&self, a: &Vector, b: &Vector) -> Option<bool> {
        if a.is_zero() || b.is_zero() {
            return Some(a.is_zero() && b.is_zero());
        }
        (self.orbit_count == Some(2)).then_some(true)
    }
}

/// Degree-0 derivations D of H with D(1) = 0.
fn derivations(m: &AInfinity) -> Vec<Matrix> {
    let md = &m.module;
    let n = md.dim();
    let mu = m.m(2).cloned().unwrap_or_else(|| MultiOp::new(2, 0));
    // unknowns: D_{ij} with |i| = |j|, i, j non-unit
    let vars: Vec<(usize, usize)> = (0..n)
        .filter(|&j| Some(j) != m.unit)
        .flat_map(|j| md.in_degree(md.degree(j)).iter().filter(|&&i| Some(i) != m.unit).map(move |&i| (i, j)).collect::<Vec<_>>())
        .collect();
    let d_of = |x: &Vector| -> Matrix {
        let mut d = Matrix::zero(n, n);
        for (k, c) in x.iter() {
            let (i, j) = vars[*k];
            d.add_entry(i, j, c);
        }
        d
    };
    // D(ab) − D(a)b − aD(b), one row per (a, b, output)
    let mut cols = Vec::new();
    for k in 0..vars.len() {
        let d = d_of(&Vector::unit(k));
        let mut col = Vector::new();
        for a in 0..n {
            for b in 0..n {
                let mut v = d.apply(&mu.eval_owned(&[a, b]));
                for (i, c) in d.column(a).iter() {
                    v.add_scaled(&mu.eval_owned(&[*i, b]), &-c);
                }
                for (i, c) in d.column(b).iter() {
                    v.add_scaled(&mu.eval_owned(&[a, *i]), &-c);
                }
                for (o, c) in v.iter() {
                    col.add_term((a * n + b) * n + o, c);
                }
            }
        }
        cols.push(col);
    }
    let rows = n * n * n;
    kernel_basis(&Matrix::from_columns(rows.max(1), cols)).iter().map(d_of).collect()
}

/// D·f = D∘f − Σ_i f(1 ⊗ … ⊗ D ⊗ … ⊗ 1) for a degree-0 derivation D.
fn act(h: &Hochschild, d: &Matrix, f: &HochschildCochain) -> HochschildCochain {
    let mut out = HochschildCochain::zero(f.arity, f.degree);
    for w in h.words_for(f.arity, f.degree) {
        let mut v = d.apply(&f.eval(&w));
        for i in 0..w.len() {
            for (x, c) in d.column(w[i]).iter() {
                let mut u = w.clone();
                u[i] = *x;
                v.add_scaled(&f.eval(&u), &-c);
            }
        }
        out.table.set(w, v);
    }
    out
}

/// Classifies minimal C∞ structures on H when degrees leave a single arity k.
///
/// Two structures are isomorphic exactly when their classes in Harr^{k,2−k}
/// lie in one Aut(H)-orbit. The orbit count is reported as 2 when the
/// derivations act on the class space V through a Lie algebra containing
/// sl(V) and dim V ≥ 2 (the image group then contains SL(V)(ℚ), which is
/// transitive on V ∖ 0), or when dim V = 1 and k = 3 (the grading
/// automorphism a ↦ λ^{|a|}a acts on V by λ^{−1}).
pub fn classify_single_arity(m: &AInfinity) -> Result<SingleArity, RhtError> {
    let h = Hochschild::from_ainfinity(m)?;
    if !h.is_commutative() {
        return Err(RhtError::Hoch(HochError::NotCommutative));
    }
    let live = live_arities(&h, arity_range(m));
    let [k] = live[..] else {
        return Err(RhtError::Precondition(format!("possibly nonzero arities {live:?}, not exactly one")));
    };
    let t = cinfty_element(m)?;
    let coh = harrison(&h, k, 2 - k as i64)?;
    let class = coh.class_of(&h, &t.comps[k]).ok_or_else(|| RhtError::Precondition(format!("m_{k} is not a cocycle")))?;
    let ders = derivations(m);
    let dim = coh.dim;
    let action: Vec<Matrix> = ders
        .iter()
        .map(|d| {
            let cols = coh.representatives.iter().map(|r| coh.class_of(&h, &act(&h, d, r)).expect("the action preserves cocycles")).collect();
            Matrix::from_columns(dim, cols)
        })
        .collect();
    let orbit_count = match dim {
        0 => Some(1),
        1 => (k == 3).then_some(2),
        _ => contains_sl(&action, dim).then_some(2),
    };
    Ok(SingleArity { arity: k, class_dim: dim, class, derivations: ders, action, orbit_count })
}

fn contains_sl(action: &[Matrix], dim: usize) -> bool {
    let flat = |m: &Matrix| -> Vector { m.entries().map(|((i, j), c)| (i * dim + j, c.clone())).collect() };
    let span = Echelon::from_columns(dim * dim, action.iter().map(flat));
    let mut gens = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                gens.push(Vector::single(i * dim + j, Scalar::int(1)));
            }
        }
        if i > 0 {
            let mut v = Vector::single(0, Scalar::int(1));
            v.add_term(i * dim + i, &Scalar::int(-1));
            gens.push(v);
        }
    }
    gens.iter().all(|g| span.contains(g))
}

/// Outcome of extending an algebra map to a C∞ morphism.
#[derive(Clone, Debug)]
pub enum Realization {
    /// {g_1 = G, g_2, …} passing check_morphism and shuffle vanishing.
    Realized { morphism: Morphism },
    /// The arity-n relation has no solution for g_{n−1}. `residual` is the
    /// unshifted defect with g_{n−1} = 0; `forced` says every earlier stage
    /// had a unique solution, so the obstruction does not depend on choices.
    Obstructed { arity: usize, residual: MultiOp, forced: bool },
}

/// Tries to extend a multiplicative degree-0 map G: H → H′ (columns = images
/// of basis elements) to a C∞ morphism (H, m) → (H′, m′), arity by arity.
pub fn realizability(g: &Matrix, src: &AInfinity, tgt: &AInfinity) -> Result<Realization, RhtError> {
    let (sm, tm) = (&src.module, &tgt.module);
    if g.cols != sm.dim() || g.rows != tm.dim() {
        return Err(RhtError::Precondition("map has the wrong shape".into()));
    }
    for j in 0..sm.dim() {
        if let Some(d) = tm.vector_degree(g.column(j)) {
            if d != sm.degree(j) {
                return Err(RhtError::Precondition(format!("G({}) has degree {d}", sm.name(j))));
            }
        }
    }
    if let (Some(u), Some(u2)) = (src.unit, tgt.unit) {
        if g.column(u) != &Vector::unit(u2) {
            return Err(RhtError::NotMultiplicative("G(1) ≠ 1".into()));
        }
    }
    let mu = src.m(2).cloned().unwrap_or_else(|| MultiOp::new(2, 0));
    let mu2 = tgt.m(2).cloned().unwrap_or_else(|| MultiOp::new(2, 0));
    for a in 0..sm.dim() {
        for b in 0..sm.dim() {
            let lhs = g.apply(&mu.eval_owned(&[a, b]));
            let mut rhs = Vector::new();
            for (i, c) in g.column(a).iter() {
                for (j, e) in g.column(b).iter() {
                    rhs.add_scaled(&mu2.eval_owned(&[*i, *j]), &(c * e));
                }
            }
            if lhs != rhs {
                return Err(RhtError::NotMultiplicative(format!("G({}·{})", sm.name(a), sm.name(b))));
            }
        }
    }
    let lo = (0..sm.dim()).filter(|&i| Some(i) != src.unit).map(|i| sm.degree(i)).min();
    let top = tm.max_degree().unwrap_or(0);
    let n_max = match lo {
        Some(lo) if lo >= 2 => (((top - 2).max(0) / (lo - 1)) as usize + 1).max(src.truncation).max(tgt.truncation),
        _ => return Err(RhtError::Precondition("source must be concentrated in degrees ≥ 2 outside the unit".into())),
    };
    let mut f = Morphism::strict(src, tgt, g);
    f.truncation = n_max;
    while f.comps.len() <= n_max {
        let k = f.comps.len();
        f.comps.push(MultiOp::new(k, 1 - k as i64));
    }
    let inputs: Vec<usize> = (0..sm.dim()).filter(|&i| Some(i) != src.unit).collect();
    let mut forced = true;
    for n in 2..=n_max {
        let residual = morphism_defect(&f, n);
        if n == 2 {
            if !residual.is_zero() {
                return Err(RhtError::NotMultiplicative("arity-2 relation".into()));
            }
            continue;
        }
        if residual.is_zero() {
            continue;
        }
        // unknown g_{n−1}: unshifted degree 2 − n on normalized words, vanishing on shuffles
        let k = n - 1;
        let basis: Vec<(Word, usize)> = words_over(&inputs, k)
            .into_iter()
            .flat_map(|w| tm.in_degree(sm.word_degree(&w) + 1 - k as i64).iter().map(move |&j| (w.clone(), j)).collect::<Vec<_>>())
            .collect();
        let table = |v: &Vector| -> MultiOp {
            let mut op = MultiOp::new(k, 1 - k as i64);
            for (i, c) in v.iter() {
                let (w, j) = &basis[*i];
                op.add(w.clone(), &Vector::single(*j, c.clone()));
            }
            op
        };
        let sd: Vec<i64> = (0..sm.dim()).map(|i| sm.degree(i) - 1).collect();
        let shuffle_cols: Vec<Vector> = (0..basis.len())
            .map(|i| {
                let op = toggle_shift(&table(&Vector::unit(i)), sm, 0);
                flatten(&shuffle_values(&op, &inputs, k, &sd), tm.dim())
            })
            .collect();
        let allowed = kernel_basis(&Matrix::from_columns(shuffle_rows(&inputs, k, tm.dim()), shuffle_cols));
        let r = flatten_op(&residual, tm.dim());
        let mut cols = Vec::new();
        for v in &allowed {
            let mut trial = f.clone();
            trial.comps[k] = table(v);
            let mut c = flatten_op(&morphism_defect(&trial, n), tm.dim());
            c.sub_assign(&r);
            cols.push(c);
        }
        let dim = cols.iter().chain(std::iter::once(&r)).filter_map(|v| v.max_index()).max().map_or(1, |m| m + 1);
        let e = Echelon::from_columns(dim, cols);
        match e.solve(&r.scaled(&Scalar::int(-1))) {
            Some(x) => {
                if e.rank() < allowed.len() {
                    forced = false;
                }
                let mut v = Vector::new();
                for (i, c) in x.iter() {
                    v.add_scaled(&allowed[*i], c);
                }
                f.comps[k] = table(&v);
            }
            None => {
                let mut unshifted = toggle_shift(&residual, sm, 2 - n as i64);
                unshifted.arity = n;
                return Ok(Realization::Obstructed { arity: n, residual: unshifted, forced });
            }
        }
    }
    let rep = check_morphism(&f);
    if !rep.ok() || !check_cinfty_morphism(&f).ok() {
        return Err(RhtError::Precondition(format!("extension failed certification: {:?}", rep.violations.first())));
    }
    Ok(Realization::Realized { morphism: f })
}

fn words_over(letters: &[usize], n: usize) -> Vec<Word> {
    let mut out: Vec<Word> = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|w| letters.iter().map(move |&i| [w.clone(), vec![i]].concat())).collect();
    }
    out
}

/// Values of op on the shuffles of each split of each word, keyed by (word index, split).
fn shuffle_values(op: &MultiOp, letters: &[usize], n: usize, sd: &[i64]) -> Vec<Vector> {
    let mut out = Vec::new();
    for w in words_over(letters, n) {
        for k in 1..n {
            out.push(op.eval_tensor(&shuffle_words(&w[..k], &w[k..], sd)));
        }
    }
    out
}

fn shuffle_rows(letters: &[usize], n: usize, dim: usize) -> usize {
    (letters.len().pow(n as u32) * n.saturating_sub(1) * dim).max(1)
}

fn flatten(vs: &[Vector], dim: usize) -> Vector {
    let mut out = Vector::new();
    for (r, v) in vs.iter().enumerate() {
        for (j, c) in v.iter() {
            out.add_term(r * dim + j, c);
        }
    }
    out
}

/// Coordinates of a table, keyed by its words in a fixed global order.
fn flatten_op(op: &MultiOp, dim: usize) -> Vector {
    let mut out = Vector::new();
    for (w, v) in &op.table {
        let key = w.iter().fold(0usize, |acc, &i| acc * (dim + 1) + i + 1);
        for (j, c) in v.iter() {
            out.add_term(key * dim + j, c);
        }
    }
    out
}
