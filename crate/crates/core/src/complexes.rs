//! Cochain complexes, dg algebras and coalgebras, homology with chosen
//! representatives, simplicial chains with the Alexander–Whitney diagonal and
//! cochain algebras with cup product.

use crate::exactlin::{kernel_basis, quotient_with_section, Echelon, Field, Matrix, QuotientData, Scalar, Vector};
use crate::graded::{tensor_module_indexed, GradedMap, GradedModule, MultiOp, Tensor};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("differential does not have degree +1 at {0}")]
    Degree(String),
    #[error("d∘d ≠ 0 on {0}")]
    NotSquareZero(String),
    #[error("{0}")]
    Axiom(String),
    #[error("invalid simplicial complex: {0}")]
    Simplicial(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Finite cochain complex: graded module with a degree +1 differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    pub module: GradedModule,
    pub d: Matrix,
}

impl ChainComplex {
    pub fn new(module: GradedModule, d: Matrix) -> Result<ChainComplex, ComplexError> {
        if (d.rows, d.cols) != (module.dim(), module.dim()) {
            return Err(ComplexError::Dimension("differential size".into()));
        }
        for ((i, j), _) in d.entries() {
            if module.degree(i) != module.degree(j) + 1 {
                return Err(ComplexError::Degree(module.name(j).to_string()));
            }
        }
        let dd = d.compose(&d);
        if let Some(((_, j), _)) = dd.entries().next() {
            return Err(ComplexError::NotSquareZero(module.name(j).to_string()));
        }
        Ok(ChainComplex { module, d })
    }

    pub fn zero_differential(module: GradedModule) -> ChainComplex {
        let n = module.dim();
        ChainComplex { module, d: Matrix::zero(n, n) }
    }

    pub fn field(&self) -> Field {
        self.module.field
    }

    pub fn dmap(&self) -> GradedMap {
        GradedMap { source: self.module.clone(), target: self.module.clone(), degree: 1, matrix: self.d.clone() }
    }

    /// Re-indexes a chain complex given with a degree −1 boundary: C^n = C_{−n}.
    pub fn from_chain_grading(module: GradedModule, boundary: Matrix) -> Result<ChainComplex, ComplexError> {
        ChainComplex::new(module.shift(0).negate_degrees(), boundary)
    }

    pub fn homology(&self) -> HomologyData {
        homology(self)
    }
}

impl GradedModule {
    /// Same basis with every degree negated.
    pub fn negate_degrees(&self) -> GradedModule {
        GradedModule::new(self.field, self.gens().iter().map(|g| (g.name.clone(), -g.degree))).unwrap()
    }
}

/// Homology with a deterministic cycle-choosing section.
#[derive(Clone, Debug)]
pub struct HomologyData {
    pub module: GradedModule,
    pub per_degree: BTreeMap<i64, QuotientData>,
    /// Section H → C (the cycle-choosing map).
    pub f1: Matrix,
    /// C → H, exact on cycles.
    pub proj: Matrix,
    boundary_solver: Echelon,
    complex_dim: usize,
}

impl HomologyData {
    /// Class of a cycle, `None` when `v` is not a cycle.
    pub fn class_of(&self, complex: &ChainComplex, v: &Vector) -> Option<Vector> {
        if !complex.d.apply(v).is_zero() {
            return None;
        }
        Some(self.proj.apply(v))
    }

    /// Some `x` with `d x = v`, or `None` when `v` is not a boundary.
    pub fn preimage(&self, v: &Vector) -> Option<Vector> {
        self.boundary_solver.solve(v)
    }

    pub fn ranks(&self) -> BTreeMap<i64, usize> {
        self.per_degree.iter().map(|(d, q)| (*d, q.dim())).collect()
    }

    pub fn rank(&self, d: i64) -> usize {
        self.module.dim_in(d)
    }

    pub fn complex_dim(&self) -> usize {
        self.complex_dim
    }
}

fn local_to_global(idx: &[usize], v: &Vector) -> Vector {
    v.map_keys(|k| idx[*k])
}

pub fn homology(c: &ChainComplex) -> HomologyData {
    let m = &c.module;
    let dm = c.dmap();
    let mut per_degree = BTreeMap::new();
    let mut gens = Vec::new();
    let mut reps: Vec<(i64, Vector)> = Vec::new();
    for deg in m.degrees().collect::<Vec<_>>() {
        let idx = m.in_degree(deg);
        let z = kernel_basis(&dm.block(deg));
        let below = m.in_degree(deg - 1);
        let bmat = dm.block(deg - 1);
        let b: Vec<Vector> = (0..below.len()).map(|j| bmat.column(j).clone()).filter(|v| !v.is_zero()).collect();
        let q = quotient_with_section(idx.len(), &z, &b).expect("image lies in kernel");
        for (k, r) in q.quotient_basis.iter().enumerate() {
            let g = local_to_global(idx, r);
            let name = match g.first() {
                Some((i, s)) if g.len() == 1 && s.is_one() => m.name(*i).to_string(),
                _ => format!("h{deg}_{k}"),
            };
            gens.push((name, deg));
            reps.push((deg, g));
        }
        per_degree.insert(deg, q);
    }
    let hmod = GradedModule::new(m.field, gens).expect("unique homology names");
    let mut f1 = Matrix::zero(m.dim(), hmod.dim());
    let mut proj = Matrix::zero(hmod.dim(), m.dim());
    // homology generators come out in degree order, matching hmod's sort
    for (h, (_, g)) in reps.iter().enumerate() {
        f1.set_column(h, g.clone());
    }
    for (deg, q) in &per_degree {
        let idx = m.in_degree(*deg);
        let hidx = hmod.in_degree(*deg);
        for (lc, &gc) in idx.iter().enumerate() {
            for (r, v) in q.project.column(lc).iter() {
                proj.add_entry(hidx[*r], gc, v);
            }
        }
    }
    let boundary_solver = Echelon::from_columns(m.dim(), c.d.columns().iter().cloned());
    HomologyData { module: hmod, per_degree, f1, proj, boundary_solver, complex_dim: m.dim() }
}

/// f − g = d'D + Dd on every basis element.
pub fn check_chain_homotopy(
    src: &ChainComplex,
    tgt: &ChainComplex,
    f: &GradedMap,
    g: &GradedMap,
    dh: &GradedMap,
) -> Result<bool, ComplexError> {
    let shapes = [&f.matrix, &g.matrix, &dh.matrix];
    if shapes.iter().any(|m| (m.rows, m.cols) != (tgt.module.dim(), src.module.dim())) {
        return Err(ComplexError::Dimension("homotopy data".into()));
    }
    let lhs = f.matrix.sub(&g.matrix);
    let rhs = tgt.d.compose(&dh.matrix).add(&dh.matrix.compose(&src.d));
    Ok(lhs == rhs)
}

/// d(a⊗b) = da⊗b + (−1)^{|a|} a⊗db.
pub fn tensor_complex(a: &ChainComplex, b: &ChainComplex) -> ChainComplex {
    let (m, pairs) = tensor_module_indexed(&a.module, &b.module);
    let pos: BTreeMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, p)| (*p, k)).collect();
    let mut d = Matrix::zero(m.dim(), m.dim());
    for (k, &(i, j)) in pairs.iter().enumerate() {
        for (i2, c) in a.d.column(i).iter() {
            d.add_entry(pos[&(*i2, j)], k, c);
        }
        let s = Scalar::sign(a.module.degree(i) % 2 != 0);
        for (j2, c) in b.d.column(j).iter() {
            d.add_entry(pos[&(i, *j2)], k, &(c * &s));
        }
    }
    ChainComplex::new(m, d).expect("tensor differential squares to zero")
}

/// Hom(C, C') with D(φ) = d'φ − (−1)^{|φ|} φd; basis element (i, j) sends c_i to c'_j.
pub fn hom_complex(c: &ChainComplex, c2: &ChainComplex) -> (ChainComplex, Vec<(usize, usize)>) {
    let mut gens = Vec::new();
    let mut pairs = Vec::new();
    for i in 0..c.module.dim() {
        for j in 0..c2.module.dim() {
            let deg = c2.module.degree(j) - c.module.degree(i);
            gens.push((format!("{}→{}", c.module.name(i), c2.module.name(j)), deg, (i, j)));
        }
    }
    gens.sort_by_key(|g| g.1);
    for g in &gens {
        pairs.push(g.2);
    }
    let m = GradedModule::new(c.field(), gens.iter().map(|g| (g.0.clone(), g.1))).unwrap();
    let pos: BTreeMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, p)| (*p, k)).collect();
    let mut d = Matrix::zero(m.dim(), m.dim());
    for (k, &(i, j)) in pairs.iter().enumerate() {
        // d'φ: c_i ↦ d'c'_j
        for (j2, v) in c2.d.column(j).iter() {
            d.add_entry(pos[&(i, *j2)], k, v);
        }
        // φd: c_{i0} ↦ coefficient of c_i in d c_{i0} times c'_j
        let s = -Scalar::sign(m.degree(k) % 2 != 0);
        for i0 in 0..c.module.dim() {
            let v = c.d.get(i, i0);
            if !v.is_zero() {
                d.add_entry(pos[&(i0, j)], k, &(&v * &s));
            }
        }
    }
    (ChainComplex::new(m, d).expect("hom differential squares to zero"), pairs)
}

/// Dg algebra given by structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgAlgebra {
    pub complex: ChainComplex,
    pub mul: MultiOp,
    pub unit: Option<Vector>,
}

impl DgAlgebra {
    pub fn new(complex: ChainComplex, mul: MultiOp, unit: Option<Vector>) -> Result<DgAlgebra, ComplexError> {
        let a = DgAlgebra { complex, mul, unit };
        a.validate()?;
        Ok(a)
    }

    pub fn module(&self) -> &GradedModule {
        &self.complex.module
    }

    pub fn field(&self) -> Field {
        self.complex.field()
    }

    pub fn d(&self) -> &Matrix {
        &self.complex.d
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> Vector {
        self.mul.eval_owned(&[i, j])
    }

    pub fn product(&self, u: &Vector, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (i, a) in u.iter() {
            for (j, b) in v.iter() {
                if let Some(w) = self.mul.eval(&[*i, *j]) {
                    out.add_scaled(w, &(a * b));
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), ComplexError> {
        let m = self.module();
        if self.mul.arity != 2 || self.mul.degree != 0 {
            return Err(ComplexError::Axiom("product must be binary of degree 0".into()));
        }
        self.mul.check_degree(m, m).map_err(|e| ComplexError::Axiom(e.to_string()))?;
        let n = m.dim();
        for i in 0..n {
            for j in 0..n {
                let ab = self.mul_basis(i, j);
                let lhs = self.complex.d.apply(&ab);
                let mut rhs = self.product(self.complex.d.column(i), &Vector::unit(j));
                let s = Scalar::sign(m.degree(i) % 2 != 0);
                rhs.add_scaled(&self.product(&Vector::unit(i), self.complex.d.column(j)), &s);
                if lhs != rhs {
                    return Err(ComplexError::Axiom(format!("Leibniz fails on {}·{}", m.name(i), m.name(j))));
                }
                if ab.is_zero() {
                    continue;
                }
                for k in 0..n {
                    let l = self.product(&ab, &Vector::unit(k));
                    let r = self.product(&Vector::unit(i), &self.mul_basis(j, k));
                    if l != r {
                        return Err(ComplexError::Axiom(format!(
                            "associativity fails on {},{},{}",
                            m.name(i),
                            m.name(j),
                            m.name(k)
                        )));
                    }
                }
            }
        }
        // associativity with ab = 0 but a(bc) ≠ 0
        for i in 0..n {
            for j in 0..n {
                if !self.mul_basis(i, j).is_zero() {
                    continue;
                }
                for k in 0..n {
                    if !self.product(&Vector::unit(i), &self.mul_basis(j, k)).is_zero() {
                        return Err(ComplexError::Axiom(format!(
                            "associativity fails on {},{},{}",
                            m.name(i),
                            m.name(j),
                            m.name(k)
                        )));
                    }
                }
            }
        }
        if let Some(e) = &self.unit {
            if m.vector_degree(e).unwrap_or(0) != 0 || !self.complex.d.apply(e).is_zero() {
                return Err(ComplexError::Axiom("unit must be a degree-0 cycle".into()));
            }
            for i in 0..n {
                let u = Vector::unit(i);
                if self.product(e, &u) != u || self.product(&u, e) != u {
                    return Err(ComplexError::Axiom(format!("unit fails on {}", m.name(i))));
                }
            }
        }
        Ok(())
    }

    /// True when ab = (−1)^{|a||b|} ba on all basis pairs.
    pub fn is_graded_commutative(&self) -> bool {
        let m = self.module();
        (0..m.dim()).all(|i| {
            (0..m.dim()).all(|j| {
                let s = Scalar::sign(m.degree(i) * m.degree(j) % 2 != 0);
                self.mul_basis(i, j) == self.mul_basis(j, i).scaled(&s)
            })
        })
    }

    /// Algebra with zero differential on a graded module with the given products.
    pub fn formal(module: GradedModule, mul: MultiOp, unit: Option<Vector>) -> Result<DgAlgebra, ComplexError> {
        DgAlgebra::new(ChainComplex::zero_differential(module), mul, unit)
    }
}

/// Dg coalgebra given by its diagonal on basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgCoalgebra {
    pub complex: ChainComplex,
    /// Δ(c_i) as a combination of two-letter words.
    pub comul: Vec<Tensor>,
}

impl DgCoalgebra {
    pub fn new(complex: ChainComplex, comul: Vec<Tensor>) -> Result<DgCoalgebra, ComplexError> {
        let c = DgCoalgebra { complex, comul };
        c.validate()?;
        Ok(c)
    }

    pub fn module(&self) -> &GradedModule {
        &self.complex.module
    }

    pub fn diag(&self, v: &Vector) -> Tensor {
        let mut out = Tensor::new();
        for (i, c) in v.iter() {
            out.add_scaled(&self.comul[*i], c);
        }
        out
    }

    /// (d⊗1 + 1⊗d) on two-letter words.
    pub fn d_tensor2(&self, t: &Tensor) -> Tensor {
        let m = self.module();
        let mut out = Tensor::new();
        for (w, c) in t.iter() {
            let (a, b) = (w[0], w[1]);
            for (a2, v) in self.complex.d.column(a).iter() {
                out.add_term(vec![*a2, b], &(c * v));
            }
            let s = Scalar::sign(m.degree(a) % 2 != 0);
            for (b2, v) in self.complex.d.column(b).iter() {
                out.add_term(vec![a, *b2], &(&(c * v) * &s));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), ComplexError> {
        let m = self.module();
        if self.comul.len() != m.dim() {
            return Err(ComplexError::Dimension("diagonal size".into()));
        }
        for (i, t) in self.comul.iter().enumerate() {
            for (w, _) in t.iter() {
                if w.len() != 2 || m.word_degree(w) != m.degree(i) {
                    return Err(ComplexError::Axiom(format!("diagonal degree on {}", m.name(i))));
                }
            }
            // (Δ⊗1)Δ = (1⊗Δ)Δ
            let mut l = Tensor::new();
            let mut r = Tensor::new();
            for (w, c) in t.iter() {
                for (w2, c2) in self.comul[w[0]].iter() {
                    l.add_term(vec![w2[0], w2[1], w[1]], &(c * c2));
                }
                for (w2, c2) in self.comul[w[1]].iter() {
                    r.add_term(vec![w[0], w2[0], w2[1]], &(c * c2));
                }
            }
            if l != r {
                return Err(ComplexError::Axiom(format!("coassociativity fails on {}", m.name(i))));
            }
            let lhs = self.diag(self.complex.d.column(i));
            let rhs = self.d_tensor2(t);
            if lhs != rhs {
                return Err(ComplexError::Axiom(format!("co-Leibniz fails on {}", m.name(i))));
            }
        }
        Ok(())
    }
}

/// Abstract simplicial complex on an ordered vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    pub vertices: Vec<String>,
    /// Sorted vertex-index lists, ordered by dimension then lexicographically.
    pub simplices: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Closure of the given facets under taking nonempty subsets.
    pub fn from_facets(vertices: Vec<String>, facets: &[Vec<usize>]) -> Result<SimplicialComplex, ComplexError> {
        let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
        for f in facets {
            let mut f = f.clone();
            f.sort();
            f.dedup();
            if f.is_empty() || f.iter().any(|&v| v >= vertices.len()) {
                return Err(ComplexError::Simplicial(format!("bad facet {f:?}")));
            }
            let k = f.len();
            for mask in 1u64..(1u64 << k) {
                set.insert((0..k).filter(|b| mask >> b & 1 == 1).map(|b| f[b]).collect());
            }
        }
        for v in 0..vertices.len() {
            set.insert(vec![v]);
        }
        let mut simplices: Vec<Vec<usize>> = set.into_iter().collect();
        simplices.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        Ok(SimplicialComplex { vertices, simplices })
    }

    pub fn with_vertex_count(n: usize, facets: &[Vec<usize>]) -> Result<SimplicialComplex, ComplexError> {
        SimplicialComplex::from_facets((0..n).map(|i| format!("v{i}")).collect(), facets)
    }

    pub fn simplex_name(&self, s: &[usize]) -> String {
        let names: Vec<&str> = s.iter().map(|&v| self.vertices[v].as_str()).collect();
        format!("({})", names.join(","))
    }
}

/// Simplicial chains in degree −dim with boundary and Alexander–Whitney diagonal.
pub fn simplicial_chain_coalgebra(v: &SimplicialComplex, field: Field) -> DgCoalgebra {
    let gens: Vec<(String, i64)> = v.simplices.iter().map(|s| (v.simplex_name(s), 1 - s.len() as i64)).collect();
    let m = GradedModule::new(field, gens).unwrap();
    // module order is by degree, so translate simplex positions
    let pos: BTreeMap<&Vec<usize>, usize> =
        v.simplices.iter().map(|s| (s, m.index_of(&v.simplex_name(s)).expect("simplex names are unique"))).collect();
    let mut d = Matrix::zero(m.dim(), m.dim());
    let mut comul = vec![Tensor::new(); m.dim()];
    for s in &v.simplices {
        let k = pos[s];
        if s.len() > 1 {
            for i in 0..s.len() {
                let mut f = s.clone();
                f.remove(i);
                d.add_entry(pos[&f], k, &field.int(if i % 2 == 1 { -1 } else { 1 }));
            }
        }
        let mut t = Tensor::new();
        for p in 0..s.len() {
            let front = s[..=p].to_vec();
            let back = s[p..].to_vec();
            t.add_term(vec![pos[&front], pos[&back]], &field.one());
        }
        comul[k] = t;
    }
    let c = ChainComplex::new(m, d).expect("simplicial boundary squares to zero");
    DgCoalgebra::new(c, comul).expect("Alexander–Whitney diagonal is a dg coalgebra")
}

/// Dual complex with the convolution (cup) product; coefficients in the ground field.
pub fn cochain_algebra(c: &DgCoalgebra) -> DgAlgebra {
    let cm = c.module();
    let m = GradedModule::new(cm.field, cm.gens().iter().map(|g| (format!("{}*", g.name), -g.degree))).unwrap();
    // dual basis order may differ from the source order; map source index -> dual index
    let dual_of: Vec<usize> = (0..cm.dim()).map(|i| m.index_of(&format!("{}*", cm.name(i))).unwrap()).collect();
    let mut d = Matrix::zero(m.dim(), m.dim());
    for j in 0..cm.dim() {
        let deg = -cm.degree(j);
        let s = -Scalar::sign(deg % 2 != 0);
        for i in 0..cm.dim() {
            let v = c.complex.d.get(j, i);
            if !v.is_zero() {
                d.add_entry(dual_of[i], dual_of[j], &(&v * &s));
            }
        }
    }
    let mut mul = MultiOp::new(2, 0);
    for (k, t) in c.comul.iter().enumerate() {
        for (w, lam) in t.iter() {
            let (a, b) = (w[0], w[1]);
            // (a*⊗b*)(a⊗b) = (−1)^{|b*||a|}
            let s = Scalar::sign((cm.degree(b) * cm.degree(a)) % 2 != 0);
            mul.add(vec![dual_of[a], dual_of[b]], &Vector::single(dual_of[k], lam * &s));
        }
    }
    let unit: Vector = (0..cm.dim())
        .filter(|&i| c.diag(&Vector::unit(i)) == Tensor::single(vec![i, i], Scalar::int(1)) && cm.degree(i) == 0)
        .map(|i| (dual_of[i], cm.field.one()))
        .collect();
    let complex = ChainComplex::new(m, d).expect("dual differential squares to zero");
    let unit = (!unit.is_zero()).then_some(unit);
    DgAlgebra::new(complex, mul, unit).expect("cochain algebra is a dga")
}

/// Linear dual of a finite dg algebra as a dg coalgebra, with the pairing
/// conventions of [`cochain_algebra`].
pub fn dual_coalgebra(a: &DgAlgebra) -> DgCoalgebra {
    let am = a.module();
    let m = GradedModule::new(am.field, am.gens().iter().map(|g| (format!("{}*", g.name), -g.degree))).unwrap();
    let dual_of: Vec<usize> = (0..am.dim()).map(|i| m.index_of(&format!("{}*", am.name(i))).unwrap()).collect();
    let mut d = Matrix::zero(m.dim(), m.dim());
    for j in 0..am.dim() {
        for (i, v) in a.d().column(j).iter() {
            // (d i*)(j) = −(−1)^{|i*|} i*(dj)
            let s = -Scalar::sign(am.degree(*i) % 2 != 0);
            d.add_entry(dual_of[j], dual_of[*i], &(v * &s));
        }
    }
    let mut comul = vec![Tensor::new(); m.dim()];
    for (w, v) in &a.mul.table {
        let s = Scalar::sign(am.degree(w[0]) * am.degree(w[1]) % 2 != 0);
        for (k, lam) in v.iter() {
            comul[dual_of[*k]].add_term(vec![dual_of[w[0]], dual_of[w[1]]], &(lam * &s));
        }
    }
    let complex = ChainComplex::new(m, d).expect("dual differential squares to zero");
    DgCoalgebra::new(complex, comul).expect("dual of a dg algebra is a dg coalgebra")
}

/// Cohomology algebra with products computed on chosen representatives.
pub fn homology_algebra(a: &DgAlgebra) -> (HomologyData, DgAlgebra) {
    let h = homology(&a.complex);
    let hm = &h.module;
    let mut mul = MultiOp::new(2, 0);
    for i in 0..hm.dim() {
        for j in 0..hm.dim() {
            let p = a.product(h.f1.column(i), h.f1.column(j));
            let cls = h.proj.apply(&p);
            mul.set(vec![i, j], cls);
        }
    }
    let unit = a.unit.as_ref().map(|e| h.proj.apply(e));
    let alg = DgAlgebra::formal(hm.clone(), mul, unit).expect("cohomology algebra is associative");
    (h, alg)
}
