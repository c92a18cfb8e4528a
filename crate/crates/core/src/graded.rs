//! Graded modules, tensor words and the Koszul sign rule.
//!
//! Basis elements of a [`GradedModule`] are stored in one global order sorted
//! by degree (stable within a degree). Multilinear maps are tables from basis
//! words to vectors.

use crate::exactlin::{Field, Lin, Matrix, Scalar, Vector};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradedError {
    #[error("malformed permutation {0:?}")]
    BadPermutation(Vec<usize>),
    #[error("duplicate basis name {0:?} in degree {1}")]
    DuplicateName(String, i64),
    #[error("map entry violates degree: {0}")]
    Degree(String),
}

pub type Word = Vec<usize>;
/// Linear combination of tensor words.
pub type Tensor = Lin<Word>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModule {
    pub field: Field,
    gens: Vec<Generator>,
    by_degree: BTreeMap<i64, Vec<usize>>,
}

impl GradedModule {
    /// Builds a module; generators are sorted by degree, keeping input order within a degree.
    pub fn new(field: Field, gens: impl IntoIterator<Item = (String, i64)>) -> Result<GradedModule, GradedError> {
        let mut g: Vec<Generator> = gens.into_iter().map(|(name, degree)| Generator { name, degree }).collect();
        g.sort_by_key(|x| x.degree);
        let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, x) in g.iter().enumerate() {
            let v = by_degree.entry(x.degree).or_default();
            if v.iter().any(|&j| g[j].name == x.name) {
                return Err(GradedError::DuplicateName(x.name.clone(), x.degree));
            }
            v.push(i);
        }
        Ok(GradedModule { field, gens: g, by_degree })
    }

    pub fn from_strs(field: Field, gens: &[(&str, i64)]) -> GradedModule {
        GradedModule::new(field, gens.iter().map(|(n, d)| (n.to_string(), *d))).expect("valid module")
    }

    pub fn zero(field: Field) -> GradedModule {
        GradedModule::new(field, []).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.gens.len()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.gens[i].degree
    }

    pub fn name(&self, i: usize) -> &str {
        &self.gens[i].name
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    /// First generator with the given name.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn in_degree(&self, d: i64) -> &[usize] {
        self.by_degree.get(&d).map_or(&[], |v| v.as_slice())
    }

    pub fn dim_in(&self, d: i64) -> usize {
        self.in_degree(d).len()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.by_degree.keys().copied()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.by_degree.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.by_degree.keys().next_back().copied()
    }

    /// Position of generator `i` inside its degree block.
    pub fn local(&self, i: usize) -> usize {
        self.in_degree(self.degree(i)).iter().position(|&j| j == i).unwrap()
    }

    pub fn word_degree(&self, w: &[usize]) -> i64 {
        w.iter().map(|&i| self.degree(i)).sum()
    }

    /// Degree of the homogeneous vector `v`, or `None` when zero or mixed.
    pub fn vector_degree(&self, v: &Vector) -> Option<i64> {
        let mut it = v.keys().map(|&i| self.degree(i));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn shift(&self, k: i64) -> GradedModule {
        GradedModule::new(self.field, self.gens.iter().map(|g| (g.name.clone(), g.degree + k))).unwrap()
    }

    pub fn zero_vec(&self) -> Vector {
        Vector::new()
    }

    pub fn format_vector(&self, v: &Vector) -> String {
        format_lin(v, |i| self.name(*i).to_string())
    }

    pub fn format_word(&self, w: &[usize]) -> String {
        let names: Vec<&str> = w.iter().map(|&i| self.name(i)).collect();
        format!("[{}]", names.join(","))
    }

    /// All words of length `n` whose generator degrees, each offset by `offset`, sum to `total`.
    pub fn words(&self, n: usize, total: i64, offset: i64) -> Vec<Word> {
        let degs: Vec<i64> = self.degrees().collect();
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        self.words_rec(n, total, offset, &degs, &mut cur, &mut out);
        out
    }

    fn words_rec(&self, n: usize, rest: i64, offset: i64, degs: &[i64], cur: &mut Word, out: &mut Vec<Word>) {
        if n == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let (lo, hi) = match (degs.first(), degs.last()) {
            (Some(a), Some(b)) => (a + offset, b + offset),
            _ => return,
        };
        let nn = n as i64;
        if rest < lo * nn || rest > hi * nn {
            return;
        }
        for &d in degs {
            for &i in self.in_degree(d) {
                cur.push(i);
                self.words_rec(n - 1, rest - (d + offset), offset, degs, cur, out);
                cur.pop();
            }
        }
    }

    /// All words of length `n`.
    pub fn all_words(&self, n: usize) -> Vec<Word> {
        let mut out: Vec<Word> = vec![vec![]];
        for _ in 0..n {
            out = out.into_iter().flat_map(|w| (0..self.dim()).map(move |i| {
                let mut v = w.clone();
                v.push(i);
                v
            })).collect();
        }
        out
    }
}

pub fn format_lin<K: Ord + Clone>(v: &Lin<K>, name: impl Fn(&K) -> String) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = v
        .iter()
        .map(|(k, c)| if c.is_one() { name(k) } else { format!("({c})·{}", name(k)) })
        .collect();
    parts.join(" + ")
}

/// Koszul sign of reordering elements of the given degrees so that position
/// `k` of the result holds element `perm[k]`.
pub fn koszul_perm(degrees: &[i64], perm: &[usize]) -> Result<Scalar, GradedError> {
    let n = degrees.len();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(GradedError::BadPermutation(perm.to_vec()));
    }
    let mut odd = false;
    for a in 0..n {
        for b in a + 1..n {
            if perm[a] > perm[b] && degrees[perm[a]] * degrees[perm[b]] % 2 != 0 {
                odd = !odd;
            }
        }
    }
    Ok(Scalar::sign(odd))
}

/// Sign of an interleaving of `left` and `right`: `interleaving[k]` is the
/// index into `left ++ right` placed at output position `k`.
pub fn koszul_sign(left: &[i64], right: &[i64], interleaving: &[usize]) -> Result<Scalar, GradedError> {
    let degs: Vec<i64> = left.iter().chain(right).copied().collect();
    koszul_perm(&degs, interleaving)
}

/// Parity of Σ_{i<j} a_i b_j: the sign of moving a block of total degree `x` past one of degree `y`.
pub fn passes(x: i64, y: i64) -> bool {
    (x * y) % 2 != 0
}

pub fn tensor_module(a: &GradedModule, b: &GradedModule) -> GradedModule {
    let (m, _) = tensor_module_indexed(a, b);
    m
}

/// Tensor module together with the pair (i, j) behind every basis element.
pub fn tensor_module_indexed(a: &GradedModule, b: &GradedModule) -> (GradedModule, Vec<(usize, usize)>) {
    let mut gens = Vec::new();
    let mut pairs = Vec::new();
    let mut degs: Vec<i64> = Vec::new();
    for da in a.degrees() {
        for db in b.degrees() {
            degs.push(da + db);
        }
    }
    degs.sort();
    degs.dedup();
    for n in degs {
        for da in a.degrees() {
            for &i in a.in_degree(da) {
                for &j in b.in_degree(n - da) {
                    gens.push((format!("{}⊗{}", a.name(i), b.name(j)), n));
                    pairs.push((i, j));
                }
            }
        }
    }
    (GradedModule::new(a.field, gens).unwrap(), pairs)
}

/// Degree-`k` linear map between graded modules, stored as one global matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    pub source: GradedModule,
    pub target: GradedModule,
    pub degree: i64,
    pub matrix: Matrix,
}

impl GradedMap {
    pub fn new(source: GradedModule, target: GradedModule, degree: i64, matrix: Matrix) -> Result<GradedMap, GradedError> {
        assert_eq!((matrix.rows, matrix.cols), (target.dim(), source.dim()));
        for ((i, j), _) in matrix.entries() {
            if target.degree(i) != source.degree(j) + degree {
                return Err(GradedError::Degree(format!("{} -> {}", source.name(j), target.name(i))));
            }
        }
        Ok(GradedMap { source, target, degree, matrix })
    }

    pub fn zero(source: &GradedModule, target: &GradedModule, degree: i64) -> GradedMap {
        let m = Matrix::zero(target.dim(), source.dim());
        GradedMap { source: source.clone(), target: target.clone(), degree, matrix: m }
    }

    pub fn identity(m: &GradedModule) -> GradedMap {
        GradedMap { source: m.clone(), target: m.clone(), degree: 0, matrix: Matrix::identity(m.dim()) }
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        self.matrix.apply(v)
    }

    /// Block from degree `d` of the source to degree `d + k` of the target, in local coordinates.
    pub fn block(&self, d: i64) -> Matrix {
        let src = self.source.in_degree(d);
        let tgt = self.target.in_degree(d + self.degree);
        let mut m = Matrix::zero(tgt.len(), src.len());
        for (c, &j) in src.iter().enumerate() {
            for (i, v) in self.matrix.column(j).iter() {
                let r = tgt.iter().position(|t| t == i).expect("degree-respecting entry");
                m.add_entry(r, c, v);
            }
        }
        m
    }

    pub fn compose(&self, other: &GradedMap) -> GradedMap {
        assert_eq!(self.source, other.target);
        GradedMap {
            source: other.source.clone(),
            target: self.target.clone(),
            degree: self.degree + other.degree,
            matrix: self.matrix.compose(&other.matrix),
        }
    }
}

/// Multilinear operation M^⊗n → N of a fixed degree as a table on basis words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiOp {
    pub arity: usize,
    pub degree: i64,
    pub table: BTreeMap<Word, Vector>,
}

impl MultiOp {
    pub fn new(arity: usize, degree: i64) -> MultiOp {
        MultiOp { arity, degree, table: BTreeMap::new() }
    }

    pub fn eval(&self, w: &[usize]) -> Option<&Vector> {
        self.table.get(w)
    }

    pub fn eval_owned(&self, w: &[usize]) -> Vector {
        self.table.get(w).cloned().unwrap_or_default()
    }

    pub fn add(&mut self, w: Word, v: &Vector) {
        if v.is_zero() {
            return;
        }
        let e = self.table.entry(w.clone()).or_default();
        e.add_assign(v);
        if e.is_zero() {
            self.table.remove(&w);
        }
    }

    pub fn set(&mut self, w: Word, v: Vector) {
        if v.is_zero() {
            self.table.remove(&w);
        } else {
            self.table.insert(w, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    pub fn eval_tensor(&self, t: &Tensor) -> Vector {
        let mut out = Vector::new();
        for (w, c) in t.iter() {
            if let Some(v) = self.table.get(w) {
                out.add_scaled(v, c);
            }
        }
        out
    }

    /// Checks every stored value against the declared degree.
    pub fn check_degree(&self, src: &GradedModule, tgt: &GradedModule) -> Result<(), GradedError> {
        for (w, v) in &self.table {
            let d = src.word_degree(w) + self.degree;
            if v.keys().any(|&i| tgt.degree(i) != d) {
                return Err(GradedError::Degree(src.format_word(w)));
            }
        }
        Ok(())
    }

    pub fn scaled(&self, c: &Scalar) -> MultiOp {
        let mut r = MultiOp::new(self.arity, self.degree);
        for (w, v) in &self.table {
            r.set(w.clone(), v.scaled(c));
        }
        r
    }

    pub fn plus(&self, o: &MultiOp) -> MultiOp {
        let mut r = self.clone();
        for (w, v) in &o.table {
            r.add(w.clone(), v);
        }
        r
    }
}

/// Tensor product of vectors as a combination of words.
pub fn tensor_vectors(vs: &[Vector]) -> Tensor {
    let mut acc = Tensor::single(vec![], Scalar::int(1));
    for v in vs {
        let mut next = Tensor::new();
        for (w, c) in acc.iter() {
            for (i, d) in v.iter() {
                let mut w2 = w.clone();
                w2.push(*i);
                next.add_term(w2, &(c * d));
            }
        }
        acc = next;
    }
    acc
}
