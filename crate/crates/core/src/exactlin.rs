//! Exact linear algebra over ℚ and prime fields.
//!
//! Vectors and matrices are sparse. Every elimination picks pivots by lowest
//! index, so all choices (solutions, kernel bases, quotient representatives)
//! are reproducible.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("boundaries are not contained in the span of the cycles")]
    NotContained,
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
}

/// Ground field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Q,
    Fp(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Field, LinError> {
        if p < 2 || (2..).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(LinError::NotPrime(p));
        }
        Ok(Field::Fp(p))
    }

    pub fn zero(self) -> Scalar {
        self.int(0)
    }

    pub fn one(self) -> Scalar {
        self.int(1)
    }

    pub fn int(self, n: i64) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Fp(p) => Scalar::Fp(n.rem_euclid(p as i64) as u64, p),
        }
    }

    /// Parses `"a"`, `"-a"` or `"a/b"`.
    pub fn parse(self, s: &str) -> Result<Scalar, LinError> {
        let err = || LinError::Parse(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        let q = Scalar::Q(BigRational::new(n, d));
        match self {
            Field::Q => Ok(q),
            Field::Fp(p) => q.reduce_mod(p).ok_or_else(err),
        }
    }

    pub fn name(self) -> String {
        match self {
            Field::Q => "Q".into(),
            Field::Fp(p) => format!("F{p}"),
        }
    }
}

/// Exact field element. Mixed ℚ/𝔽p arithmetic reduces the rational side,
/// which lets small integer constants act uniformly.
#[derive(Clone, Debug)]
pub enum Scalar {
    Q(BigRational),
    Fp(u64, u64),
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

impl Scalar {
    pub fn int(n: i64) -> Scalar {
        Field::Q.int(n)
    }

    pub fn sign(odd: bool) -> Scalar {
        Scalar::int(if odd { -1 } else { 1 })
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp(v, _) => *v == 1,
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Q,
            Scalar::Fp(_, p) => Field::Fp(*p),
        }
    }

    fn reduce_mod(&self, p: u64) -> Option<Scalar> {
        match self {
            Scalar::Fp(v, q) => {
                assert_eq!(*q, p, "mixed prime fields");
                Some(Scalar::Fp(*v, p))
            }
            Scalar::Q(r) => {
                let pb = BigInt::from(p);
                let n = ((r.numer() % &pb) + &pb) % &pb;
                let d = ((r.denom() % &pb) + &pb) % &pb;
                let d = d.to_u64()?;
                if d == 0 {
                    return None;
                }
                let n = n.to_u64()?;
                Some(Scalar::Fp(mulmod(n, powmod(d, p - 2, p), p), p))
            }
        }
    }

    fn unify(a: &Scalar, b: &Scalar) -> (Scalar, Scalar) {
        match (a, b) {
            (Scalar::Q(_), Scalar::Fp(_, p)) => (a.reduce_mod(*p).expect("denominator divisible by p"), b.clone()),
            (Scalar::Fp(_, p), Scalar::Q(_)) => (a.clone(), b.reduce_mod(*p).expect("denominator divisible by p")),
            _ => (a.clone(), b.clone()),
        }
    }

    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Q(q) => {
                assert!(!q.is_zero(), "division by zero");
                Scalar::Q(q.recip())
            }
            Scalar::Fp(v, p) => {
                assert!(*v != 0, "division by zero");
                Scalar::Fp(powmod(*v, p - 2, *p), *p)
            }
        }
    }

    pub fn div(&self, o: &Scalar) -> Scalar {
        self * &o.inv()
    }

    /// Numerator and denominator when rational, residue when modular.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Q(q) => Some(q),
            _ => None,
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match Scalar::unify(self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => a == b,
            (Scalar::Fp(a, p), Scalar::Fp(b, q)) => a == b && p == q,
            _ => false,
        }
    }
}
impl Eq for Scalar {}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Fp(v, _) => write!(f, "{v}"),
        }
    }
}

impl<'a> Add for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        match Scalar::unify(self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp(a, p), Scalar::Fp(b, _)) => Scalar::Fp((a + b) % p, p),
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl<'a> Mul for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        match Scalar::unify(self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp(a, p), Scalar::Fp(b, _)) => Scalar::Fp(mulmod(a, b, p), p),
            _ => unreachable!(),
        }
    }
}

impl<'a> Neg for &'a Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp(a, p) => Scalar::Fp((p - a) % p, *p),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        &self + &o
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = &*self + o;
    }
}

impl Scalar {
    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Q(q) if q.is_negative())
    }
}

/// Sparse formal linear combination over an ordered key set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lin<K: Ord> {
    terms: BTreeMap<K, Scalar>,
}

impl<K: Ord> Default for Lin<K> {
    fn default() -> Self {
        Lin { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Lin<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(k: K, c: Scalar) -> Self {
        let mut l = Self::new();
        l.add_term(k, &c);
        l
    }

    pub fn add_term(&mut self, k: K, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, o: &Lin<K>, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &o.terms {
            self.add_term(k.clone(), &(v * c));
        }
    }

    pub fn add_assign(&mut self, o: &Lin<K>) {
        for (k, v) in &o.terms {
            self.add_term(k.clone(), v);
        }
    }

    pub fn sub_assign(&mut self, o: &Lin<K>) {
        for (k, v) in &o.terms {
            self.add_term(k.clone(), &-v);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Lin<K> {
        let mut r = Lin::new();
        r.add_scaled(self, c);
        r
    }

    pub fn get(&self, k: &K) -> Option<&Scalar> {
        self.terms.get(k)
    }

    pub fn coeff(&self, k: &K) -> Scalar {
        self.terms.get(k).cloned().unwrap_or_else(|| Scalar::int(0))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Scalar)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn first(&self) -> Option<(&K, &Scalar)> {
        self.terms.iter().next()
    }

    pub fn map_keys<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> L) -> Lin<L> {
        let mut r = Lin::new();
        for (k, v) in &self.terms {
            r.add_term(f(k), v);
        }
        r
    }

    pub(crate) fn range_from(&self, k: &K) -> impl Iterator<Item = (&K, &Scalar)> {
        self.terms.range(k.clone()..)
    }
}

impl<K: Ord + Clone> FromIterator<(K, Scalar)> for Lin<K> {
    fn from_iter<I: IntoIterator<Item = (K, Scalar)>>(it: I) -> Self {
        let mut l = Lin::new();
        for (k, v) in it {
            l.add_term(k, &v);
        }
        l
    }
}

/// Sparse vector indexed by basis position.
pub type Vector = Lin<usize>;

impl Vector {
    pub fn unit(i: usize) -> Vector {
        Vector::single(i, Scalar::int(1))
    }

    pub fn from_dense(v: &[Scalar]) -> Vector {
        v.iter().cloned().enumerate().collect()
    }

    pub fn to_dense(&self, n: usize, field: Field) -> Vec<Scalar> {
        let mut out = vec![field.zero(); n];
        for (i, c) in self.iter() {
            out[*i] = c.clone();
        }
        out
    }

    pub fn max_index(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }
}

/// Sparse matrix stored by columns; column `j` is the image of basis vector `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    columns: Vec<Vector>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, columns: vec![Vector::new(); cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        Matrix { rows: n, cols: n, columns: (0..n).map(Vector::unit).collect() }
    }

    pub fn from_columns(rows: usize, columns: Vec<Vector>) -> Matrix {
        for c in &columns {
            if let Some(m) = c.max_index() {
                assert!(m < rows, "column entry out of range");
            }
        }
        Matrix { rows, cols: columns.len(), columns }
    }

    pub fn from_dense(rows: &[Vec<Scalar>]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Matrix::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m.add_entry(i, j, v);
            }
        }
        m
    }

    pub fn from_ints(rows: &[&[i64]]) -> Matrix {
        let d: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(|&x| Scalar::int(x)).collect()).collect();
        Matrix::from_dense(&d)
    }

    pub fn column(&self, j: usize) -> &Vector {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vector] {
        &self.columns
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.columns[j].coeff(&i)
    }

    pub fn add_entry(&mut self, i: usize, j: usize, c: &Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        self.columns[j].add_term(i, c);
    }

    pub fn set_column(&mut self, j: usize, v: Vector) {
        if let Some(m) = v.max_index() {
            assert!(m < self.rows);
        }
        self.columns[j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &Scalar)> {
        self.columns.iter().enumerate().flat_map(|(j, c)| c.iter().map(move |(i, v)| ((*i, j), v)))
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_zero())
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (j, c) in v.iter() {
            assert!(*j < self.cols, "vector index out of range");
            out.add_scaled(&self.columns[*j], c);
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "compose dimension mismatch");
        Matrix { rows: self.rows, cols: other.cols, columns: other.columns.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.lin_comb(other, &Scalar::int(1))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.lin_comb(other, &Scalar::int(-1))
    }

    fn lin_comb(&self, other: &Matrix, c: &Scalar) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (a, b) in m.columns.iter_mut().zip(&other.columns) {
            a.add_scaled(b, c);
        }
        m
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, columns: self.columns.iter().map(|v| v.scaled(c)).collect() }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.cols, self.rows);
        for ((i, j), v) in self.entries() {
            t.add_entry(j, i, v);
        }
        t
    }

    pub fn rank(&self) -> usize {
        Echelon::from_columns(self.rows, self.columns.iter().cloned()).rank()
    }
}

/// Incremental column echelon form. Each stored vector has its pivot at its
/// lowest nonzero index, normalized to 1, and remembers how it was built from
/// the inserted columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    inserted: usize,
    rows: Vec<(usize, Vector, Vector)>,
    by_pivot: BTreeMap<usize, usize>,
    independent: Vec<usize>,
    relations: Vec<Vector>,
}

impl Echelon {
    pub fn new(dim: usize) -> Echelon {
        Echelon { dim, inserted: 0, rows: Vec::new(), by_pivot: BTreeMap::new(), independent: Vec::new(), relations: Vec::new() }
    }

    pub fn from_columns(dim: usize, cols: impl IntoIterator<Item = Vector>) -> Echelon {
        let mut e = Echelon::new(dim);
        for c in cols {
            e.insert(c);
        }
        e
    }

    fn reduce(&self, mut v: Vector) -> (Vector, Vector) {
        let mut combo = Vector::new();
        let mut cursor = 0usize;
        loop {
            let hit = v.range_from(&cursor).find(|(k, _)| self.by_pivot.contains_key(k)).map(|(k, c)| (*k, c.clone()));
            let Some((k, c)) = hit else { break };
            let (_, ev, ec) = &self.rows[self.by_pivot[&k]];
            v.add_scaled(ev, &-&c);
            combo.add_scaled(ec, &c);
            cursor = k + 1;
        }
        (v, combo)
    }

    /// Inserts a column; returns true when it was independent of the previous ones.
    pub fn insert(&mut self, v: Vector) -> bool {
        if let Some(m) = v.max_index() {
            assert!(m < self.dim, "vector index out of range");
        }
        let idx = self.inserted;
        self.inserted += 1;
        let (r, combo) = self.reduce(v);
        // r = v - combo·(columns), so r expressed in columns is e_idx - combo
        let mut expr = Vector::unit(idx);
        expr.sub_assign(&combo);
        match r.first().map(|(k, c)| (*k, c.clone())) {
            None => {
                self.relations.push(expr);
                false
            }
            Some((p, c)) => {
                let ci = c.inv();
                self.by_pivot.insert(p, self.rows.len());
                self.rows.push((p, r.scaled(&ci), expr.scaled(&ci)));
                self.independent.push(idx);
                true
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Indices of inserted columns that were independent.
    pub fn independent(&self) -> &[usize] {
        &self.independent
    }

    /// Relations Σ c_j col_j = 0, one per dependent column, in insertion order.
    pub fn relations(&self) -> &[Vector] {
        &self.relations
    }

    /// Coefficients x with Σ x_j col_j = v (supported on independent columns).
    pub fn solve(&self, v: &Vector) -> Option<Vector> {
        let (r, combo) = self.reduce(v.clone());
        r.is_zero().then_some(combo)
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.reduce(v.clone()).0.is_zero()
    }
}

/// Solves `M x = b`; `None` when inconsistent.
pub fn solve_linear(m: &Matrix, b: &Vector) -> Result<Option<Vector>, LinError> {
    if let Some(i) = b.max_index() {
        if i >= m.rows {
            return Err(LinError::Dimension(format!("rhs index {i} with {} rows", m.rows)));
        }
    }
    let e = Echelon::from_columns(m.rows, m.columns.iter().cloned());
    Ok(e.solve(b))
}

/// Basis of the null space, one vector per non-pivot column.
pub fn kernel_basis(m: &Matrix) -> Vec<Vector> {
    Echelon::from_columns(m.rows, m.columns.iter().cloned()).relations().to_vec()
}

/// Presentation of span(cycles)/span(boundaries) with a chosen section.
#[derive(Clone, Debug)]
pub struct QuotientData {
    pub ambient: usize,
    pub cycle_basis: Vec<Vector>,
    pub boundary_basis: Vec<Vector>,
    pub quotient_basis: Vec<Vector>,
    /// Ambient coordinates to quotient coordinates; exact on cycles.
    pub project: Matrix,
    /// Quotient coordinates to representatives.
    pub section: Matrix,
    solver: Echelon,
    nb: usize,
    reps: Vec<usize>,
}

impl QuotientData {
    pub fn dim(&self) -> usize {
        self.quotient_basis.len()
    }

    /// Class of a cycle; `None` if `v` is not in the cycle span.
    pub fn class_of(&self, v: &Vector) -> Option<Vector> {
        let x = self.solver.solve(v)?;
        Some(self.reps.iter().enumerate().filter_map(|(q, &col)| x.get(&col).map(|c| (q, c.clone()))).collect())
    }

    pub fn is_boundary(&self, v: &Vector) -> bool {
        match self.class_of(v) {
            Some(c) => c.is_zero(),
            None => false,
        }
    }

    /// Writes a boundary in terms of `boundary_basis`.
    pub fn boundary_coords(&self, v: &Vector) -> Option<Vector> {
        let x = self.solver.solve(v)?;
        if x.keys().any(|k| *k >= self.nb) {
            return None;
        }
        Some(x)
    }
}

pub fn quotient_with_section(ambient: usize, cycles: &[Vector], boundaries: &[Vector]) -> Result<QuotientData, LinError> {
    let zspan = Echelon::from_columns(ambient, cycles.iter().cloned());
    if !boundaries.iter().all(|b| zspan.contains(b)) {
        return Err(LinError::NotContained);
    }
    let mut solver = Echelon::new(ambient);
    let mut boundary_basis = Vec::new();
    for b in boundaries {
        if solver.insert(b.clone()) {
            boundary_basis.push(b.clone());
        }
    }
    // rebuild so column indices of the boundary part are contiguous
    let mut solver2 = Echelon::new(ambient);
    for b in &boundary_basis {
        solver2.insert(b.clone());
    }
    let nb = boundary_basis.len();
    let mut reps = Vec::new();
    let mut quotient_basis = Vec::new();
    let mut cycle_basis = boundary_basis.clone();
    for z in cycles {
        let idx = nb + reps.len();
        if solver2.contains(z) {
            continue;
        }
        solver2.insert(z.clone());
        reps.push(idx);
        quotient_basis.push(z.clone());
        cycle_basis.push(z.clone());
    }
    let solver = solver2;
    let mut ext = solver.clone();
    for i in 0..ambient {
        ext.insert(Vector::unit(i));
    }
    let mut project = Matrix::zero(quotient_basis.len(), ambient);
    for i in 0..ambient {
        let x = ext.solve(&Vector::unit(i)).expect("standard basis spans");
        for (q, &col) in reps.iter().enumerate() {
            if let Some(c) = x.get(&col) {
                project.add_entry(q, i, c);
            }
        }
    }
    let section = Matrix::from_columns(ambient, quotient_basis.clone());
    Ok(QuotientData { ambient, cycle_basis, boundary_basis, quotient_basis, project, section, solver, nb, reps })
}

/// Dense Gaussian elimination rank, kept deliberately naive for cross-checks.
pub fn dense_rank(rows: &[Vec<Scalar>]) -> usize {
    let mut a: Vec<Vec<Scalar>> = rows.to_vec();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, p);
        let inv = a[rank][c].inv();
        for r in 0..a.len() {
            if r != rank && !a[r][c].is_zero() {
                let f = &a[r][c] * &inv;
                for k in 0..ncols {
                    let t = &a[rank][k] * &f;
                    a[r][k] = &a[r][k] - &t;
                }
            }
        }
        rank += 1;
    }
    rank
}
