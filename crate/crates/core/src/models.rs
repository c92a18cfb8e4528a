//! Ready-made inputs: free graded-commutative dg algebras, the cohomology of
//! S²∨S²∨S⁵ with its (p, q) structures, a finite cdga model of the
//! non-formal space with that cohomology, spheres, triangulations, and the
//! Hopf fibration data.

use crate::ainfty::AInfinity;
use crate::complexes::{ChainComplex, DgAlgebra, DgCoalgebra, SimplicialComplex};
use crate::exactlin::{kernel_basis, Field, Lin, Matrix, Scalar, Vector};
use crate::graded::{GradedModule, MultiOp, Tensor, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Monomial in the generators as a sorted index list.
pub type Monomial = Vec<usize>;
pub type Poly = Lin<Monomial>;

/// Free graded-commutative algebra Λ(V, d) truncated above a degree.
#[derive(Clone, Debug)]
pub struct FreeCdga {
    pub field: Field,
    pub names: Vec<String>,
    pub degrees: Vec<i64>,
    /// Differential of each generator.
    pub d: Vec<Poly>,
}

impl FreeCdga {
    pub fn new(field: Field) -> FreeCdga {
        FreeCdga { field, names: vec![], degrees: vec![], d: vec![] }
    }

    /// Adds a generator; `d` lists (coefficient, monomial in existing generator names).
    pub fn gen(&mut self, name: &str, degree: i64, d: &[(i64, &[&str])]) -> usize {
        let mut p = Poly::new();
        for (c, mono) in d {
            let idx: Vec<usize> = mono.iter().map(|n| self.names.iter().position(|x| x == n).expect("known generator")).collect();
            let (s, m) = self.normalize(&idx);
            if let Some(m) = m {
                p.add_term(m, &(&self.field.int(*c) * &s));
            }
        }
        self.names.push(name.to_string());
        self.degrees.push(degree);
        self.d.push(p);
        self.names.len() - 1
    }

    fn deg(&self, m: &[usize]) -> i64 {
        m.iter().map(|&g| self.degrees[g]).sum()
    }

    /// Sorts a product of generators with its Koszul sign; `None` if an odd generator repeats.
    pub fn normalize(&self, m: &[usize]) -> (Scalar, Option<Monomial>) {
        let mut v = m.to_vec();
        let mut odd = false;
        for i in 0..v.len() {
            for j in 0..v.len() - 1 - i {
                if v[j] > v[j + 1] {
                    if self.degrees[v[j]] % 2 != 0 && self.degrees[v[j + 1]] % 2 != 0 {
                        odd = !odd;
                    }
                    v.swap(j, j + 1);
                }
            }
        }
        for w in v.windows(2) {
            if w[0] == w[1] && self.degrees[w[0]] % 2 != 0 {
                return (Scalar::int(1), None);
            }
        }
        (Scalar::sign(odd), Some(v))
    }

    fn monomials(&self, max_degree: i64) -> Vec<Monomial> {
        let mut out = vec![vec![]];
        let mut frontier = vec![vec![]];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for m in &frontier {
                let start = m.last().copied().unwrap_or(0);
                for g in start..self.names.len() {
                    if self.degrees[g] % 2 != 0 && m.last() == Some(&g) {
                        continue;
                    }
                    let mut m2: Monomial = m.clone();
                    m2.push(g);
                    if self.deg(&m2) <= max_degree {
                        next.push(m2);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    fn mono_name(&self, m: &[usize]) -> String {
        if m.is_empty() {
            return "1".into();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < m.len() {
            let mut j = i;
            while j < m.len() && m[j] == m[i] {
                j += 1;
            }
            let e = j - i;
            parts.push(if e == 1 { self.names[m[i]].clone() } else { format!("{}^{}", self.names[m[i]], e) });
            i = j;
        }
        parts.join("")
    }

    fn d_mono(&self, m: &[usize]) -> Poly {
        let mut out = Poly::new();
        let mut pre = 0i64;
        for (i, &g) in m.iter().enumerate() {
            let s = Scalar::sign(pre % 2 != 0);
            for (dm, c) in self.d[g].iter() {
                let mut w: Vec<usize> = m[..i].to_vec();
                w.extend_from_slice(dm);
                w.extend_from_slice(&m[i + 1..]);
                let (s2, n) = self.normalize(&w);
                if let Some(n) = n {
                    out.add_term(n, &(&(c * &s) * &s2));
                }
            }
            pre += self.degrees[g];
        }
        out
    }

    /// Structure-constant presentation of Λ(V)/Λ^{>max_degree}.
    pub fn build(&self, max_degree: i64) -> DgAlgebra {
        self.build_with_basis(max_degree).0
    }

    /// Like `build`, also returning the monomial of each basis index.
    pub fn build_with_basis(&self, max_degree: i64) -> (DgAlgebra, Vec<Monomial>) {
        let monos = self.monomials(max_degree);
        let m = GradedModule::new(self.field, monos.iter().map(|x| (self.mono_name(x), self.deg(x)))).unwrap();
        let pos: BTreeMap<Monomial, usize> = monos.iter().map(|x| (x.clone(), m.index_of(&self.mono_name(x)).unwrap())).collect();
        let to_vec = |p: &Poly| -> Vector { p.iter().filter_map(|(k, c)| pos.get(k).map(|i| (*i, c.clone()))).collect() };
        let mut d = Matrix::zero(m.dim(), m.dim());
        let mut mul = MultiOp::new(2, 0);
        for a in &monos {
            d.set_column(pos[a], to_vec(&self.d_mono(a)));
            for b in &monos {
                if self.deg(a) + self.deg(b) > max_degree {
                    continue;
                }
                let mut w = a.clone();
                w.extend_from_slice(b);
                let (s, n) = self.normalize(&w);
                if let Some(n) = n {
                    mul.set(vec![pos[a], pos[b]], Vector::single(pos[&n], s));
                }
            }
        }
        let unit = Vector::unit(pos[&vec![]]);
        let c = ChainComplex::new(m, d).expect("free cdga differential squares to zero");
        let mut basis = monos;
        basis.sort_by_key(|x| pos[x]);
        (DgAlgebra::new(c, mul, Some(unit)).expect("free cdga is a dga"), basis)
    }
}

/// Free associative algebra T(V, d) truncated above a degree.
#[derive(Clone, Debug)]
pub struct FreeDga {
    pub field: Field,
    pub names: Vec<String>,
    pub degrees: Vec<i64>,
    pub d: Vec<Tensor>,
}

impl FreeDga {
    pub fn new(field: Field) -> FreeDga {
        FreeDga { field, names: vec![], degrees: vec![], d: vec![] }
    }

    pub fn gen(&mut self, name: &str, degree: i64, d: &[(i64, &[&str])]) -> usize {
        let mut p = Tensor::new();
        for (c, w) in d {
            let idx: Vec<usize> = w.iter().map(|n| self.names.iter().position(|x| x == n).expect("known generator")).collect();
            p.add_term(idx, &self.field.int(*c));
        }
        self.gen_tensor(name, degree, p)
    }

    pub fn gen_tensor(&mut self, name: &str, degree: i64, d: Tensor) -> usize {
        self.names.push(name.to_string());
        self.degrees.push(degree);
        self.d.push(d);
        self.names.len() - 1
    }

    fn deg(&self, w: &[usize]) -> i64 {
        w.iter().map(|&g| self.degrees[g]).sum()
    }

    fn word_name(&self, w: &[usize]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&g| self.names[g].as_str()).collect::<Vec<_>>().join("·")
    }

    fn d_word(&self, w: &[usize]) -> Tensor {
        let mut out = Tensor::new();
        let mut pre = 0i64;
        for (i, &g) in w.iter().enumerate() {
            let s = Scalar::sign(pre % 2 != 0);
            for (dw, c) in self.d[g].iter() {
                let mut x = w[..i].to_vec();
                x.extend_from_slice(dw);
                x.extend_from_slice(&w[i + 1..]);
                out.add_term(x, &(c * &s));
            }
            pre += self.degrees[g];
        }
        out
    }

    pub fn build(&self, max_degree: i64) -> DgAlgebra {
        self.build_with_basis(max_degree).0
    }

    /// Requires every generator to have positive degree.
    pub fn build_with_basis(&self, max_degree: i64) -> (DgAlgebra, Vec<Word>) {
        let mut words: Vec<Word> = vec![vec![]];
        let mut frontier: Vec<Word> = vec![vec![]];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for w in &frontier {
                for g in 0..self.names.len() {
                    let mut w2 = w.clone();
                    w2.push(g);
                    if self.deg(&w2) <= max_degree {
                        next.push(w2);
                    }
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        let m = GradedModule::new(self.field, words.iter().map(|w| (self.word_name(w), self.deg(w)))).unwrap();
        let pos: BTreeMap<Word, usize> = words.iter().map(|w| (w.clone(), m.index_of(&self.word_name(w)).unwrap())).collect();
        let to_vec = |t: &Tensor| -> Vector { t.iter().filter_map(|(k, c)| pos.get(k).map(|i| (*i, c.clone()))).collect() };
        let mut d = Matrix::zero(m.dim(), m.dim());
        let mut mul = MultiOp::new(2, 0);
        for a in &words {
            d.set_column(pos[a], to_vec(&self.d_word(a)));
            for b in &words {
                let mut w = a.clone();
                w.extend_from_slice(b);
                if let Some(&k) = pos.get(&w) {
                    mul.set(vec![pos[a], pos[b]], Vector::unit(k));
                }
            }
        }
        let c = ChainComplex::new(m, d).expect("free dga differential squares to zero");
        words.sort_by_key(|x| pos[x]);
        (DgAlgebra::new(c, mul, Some(Vector::unit(pos[&vec![]]))).expect("free dga is a dga"), words)
    }
}

/// Random connected dga with at most `max_dim` basis elements, all of positive
/// degree in [2, 8] apart from the unit. Differentials of generators are random
/// cycles, so the result is usually not formal.
pub fn random_dga(seed: u64, commutative: bool, max_dim: usize) -> DgAlgebra {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = 8;
    let ngens = rng.gen_range(3..=4);
    let mut degs: Vec<i64> = (0..ngens).map(|_| rng.gen_range(2..=5)).collect();
    degs.sort();
    let names = ["a", "b", "c", "e", "f"];
    let mut coef = |rng: &mut ChaCha8Rng| rng.gen_range(-2i64..=2);
    if commutative {
        let mut f = FreeCdga::new(Field::Q);
        for (i, &k) in degs.iter().enumerate() {
            let d = if i == 0 { Poly::new() } else {
                let (a, basis) = f.build_with_basis(top);
                random_cycle(&a, k + 1, &mut rng, &mut coef).map_keys(|&j| basis[j].clone())
            };
            f.names.push(names[i].into());
            f.degrees.push(k);
            f.d.push(d);
        }
        let t = (2..=top).rev().find(|&t| f.build(t).module().dim() <= max_dim).unwrap_or(2);
        f.build(t)
    } else {
        let mut f = FreeDga::new(Field::Q);
        for (i, &k) in degs.iter().enumerate() {
            let d = if i == 0 { Tensor::new() } else {
                let (a, basis) = f.build_with_basis(top);
                random_cycle(&a, k + 1, &mut rng, &mut coef).map_keys(|&j| basis[j].clone())
            };
            f.gen_tensor(names[i], k, d);
        }
        let t = (2..=top).rev().find(|&t| f.build(t).module().dim() <= max_dim).unwrap_or(2);
        f.build(t)
    }
}

fn random_cycle(a: &DgAlgebra, degree: i64, rng: &mut ChaCha8Rng, coef: &mut impl FnMut(&mut ChaCha8Rng) -> i64) -> Vector {
    let m = a.module();
    let idx = m.in_degree(degree).to_vec();
    if idx.is_empty() {
        return Vector::new();
    }
    let cols: Vec<Vector> = idx.iter().map(|&i| a.d().column(i).clone()).collect();
    let dm = Matrix::from_columns(m.dim(), cols);
    let ker = kernel_basis(&dm);
    let mut out = Vector::new();
    for k in &ker {
        let c = a.field().int(coef(rng));
        for (j, v) in k.iter() {
            out.add_term(idx[*j], &(v * &c));
        }
    }
    if out.is_zero() {
        if let Some(k) = ker.first() {
            out = k.map_keys(|j| idx[*j]);
        }
    }
    out
}

/// Cohomology of S²∨S²∨S⁵ with the C∞ structure m₃(x,x,y) = p·z, m₃(x,y,y) = q·z.
///
/// Shuffle vanishing fixes the rest of m₃: m₃(y,x,x) = −p·z, m₃(y,y,x) = −q·z
/// and m₃ vanishes on the words xxx, yyy, xyx, yxy.
pub fn worked_example(p: i64, q: i64) -> AInfinity {
    worked_example_q(&Scalar::int(p), &Scalar::int(q))
}

pub fn worked_example_q(p: &Scalar, q: &Scalar) -> AInfinity {
    let m = GradedModule::from_strs(Field::Q, &[("e", 0), ("x", 2), ("y", 2), ("z", 5)]);
    let mut a = AInfinity::new(m, 3);
    a.unit = Some(0);
    for i in 0..4 {
        a.ops[2].set(vec![0, i], Vector::unit(i));
        a.ops[2].set(vec![i, 0], Vector::unit(i));
    }
    let (x, y, z) = (1, 2, 3);
    a.ops[3].set(vec![x, x, y], Vector::single(z, p.clone()));
    a.ops[3].set(vec![y, x, x], Vector::single(z, -p));
    a.ops[3].set(vec![x, y, y], Vector::single(z, q.clone()));
    a.ops[3].set(vec![y, y, x], Vector::single(z, -q));
    a
}

/// Generators of the finite model of Y = (S²∨S²) ∪ e⁵ with a non-trivial
/// attaching map: x, y closed in degree 2; u₁, u₂, u₃ kill x², xy, y²;
/// w kills the Massey class yu₂ − xu₃ and leaves z = yu₁ − xu₂; further
/// generators kill the cohomology that would otherwise appear in degree 6.
pub fn y_model_generators() -> FreeCdga {
    let mut f = FreeCdga::new(Field::Q);
    f.gen("x", 2, &[]);
    f.gen("y", 2, &[]);
    f.gen("u1", 3, &[(1, &["x", "x"])]);
    f.gen("u2", 3, &[(1, &["x", "y"])]);
    f.gen("u3", 3, &[(1, &["y", "y"])]);
    f.gen("w", 4, &[(1, &["y", "u2"]), (-1, &["x", "u3"])]);
    f.gen("v", 5, &[(1, &["y", "w"]), (1, &["u2", "u3"])]);
    f
}

/// Truncation degree of the Y model.
pub const Y_TOP: i64 = 7;

pub fn y_model() -> DgAlgebra {
    y_model_generators().build(Y_TOP)
}

/// Formal counterpart X = S²∨S²∨S⁵: cohomology with zero differential.
pub fn x_algebra() -> DgAlgebra {
    let a = worked_example(0, 0);
    DgAlgebra::formal(a.module.clone(), a.ops[2].clone(), Some(Vector::unit(0))).unwrap()
}

/// H*(S^n) as a formal algebra with unit e and generator s.
pub fn sphere(n: i64) -> DgAlgebra {
    let m = GradedModule::from_strs(Field::Q, &[("e", 0), ("s", n)]);
    let mut mul = MultiOp::new(2, 0);
    for i in 0..2 {
        mul.set(vec![0, i], Vector::unit(i));
        mul.set(vec![i, 0], Vector::unit(i));
    }
    DgAlgebra::formal(m, mul, Some(Vector::unit(0))).unwrap()
}

/// Standard 7-vertex triangulation of the torus.
pub fn torus7() -> SimplicialComplex {
    let mut facets = Vec::new();
    for i in 0..7 {
        facets.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        facets.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    SimplicialComplex::with_vertex_count(7, &facets).unwrap()
}

/// Two triangle circles and a hollow tetrahedron glued at one vertex: a
/// complex with the cohomology groups of the torus but trivial products.
pub fn wedge_s1_s1_s2() -> SimplicialComplex {
    let facets = vec![
        vec![0, 1],
        vec![1, 2],
        vec![0, 2],
        vec![0, 3],
        vec![3, 4],
        vec![0, 4],
        vec![0, 5, 6],
        vec![0, 5, 7],
        vec![0, 6, 7],
        vec![5, 6, 7],
    ];
    SimplicialComplex::with_vertex_count(8, &facets).unwrap()
}

/// Cellular chain coalgebra of S² (cells in chain degrees 0 and 2), in cohomological grading.
pub fn s2_cells() -> DgCoalgebra {
    let m = GradedModule::from_strs(Field::Q, &[("e2", -2), ("e0", 0)]);
    let c = ChainComplex::zero_differential(m);
    let (e2, e0) = (0, 1);
    let mut comul = vec![Tensor::new(), Tensor::new()];
    comul[e0].add_term(vec![e0, e0], &Scalar::int(1));
    comul[e2].add_term(vec![e0, e2], &Scalar::int(1));
    comul[e2].add_term(vec![e2, e0], &Scalar::int(1));
    DgCoalgebra::new(c, comul).unwrap()
}

/// Exterior algebra on one generator of chain degree 1 (so cohomological degree −1).
pub fn exterior_s1() -> DgAlgebra {
    let m = GradedModule::from_strs(Field::Q, &[("t", -1), ("1", 0)]);
    let (t, one) = (0, 1);
    let mut mul = MultiOp::new(2, 0);
    mul.set(vec![one, one], Vector::unit(one));
    mul.set(vec![one, t], Vector::unit(t));
    mul.set(vec![t, one], Vector::unit(t));
    DgAlgebra::formal(m, mul, Some(Vector::unit(one))).unwrap()
}
