//! Shuffle (co)products, bar and cobar constructions, bar homology and the
//! bialgebra test.
//!
//! Bar words [a₁|…|a_n] carry degree Σ(|a_i| − 1); cobar words carry
//! Σ(|c_i| + 1). Both are truncated by absolute total degree, and the extreme
//! degree is never reported in homology because its neighbours are missing.

use crate::ainfty::{blocks, insert_op, pad, AInfinity, Comps, Morphism};
use crate::complexes::{homology, ChainComplex, DgCoalgebra, HomologyData};
use crate::exactlin::{Lin, Matrix, Scalar, Vector};
use crate::graded::{GradedModule, Tensor, Word};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BarError {
    #[error("input is not connected: letter {0} has shifted degree {1}")]
    Unbounded(String, i64),
    #[error("input is not reduced: {0}")]
    NotReduced(String),
}

/// Signed sum over all shuffles of `u` and `v`; `sd[i]` is the degree used for
/// Koszul signs of letter `i`.
pub fn shuffle_words(u: &[usize], v: &[usize], sd: &[i64]) -> Tensor {
    let mut out = Tensor::new();
    let mut cur = Vec::with_capacity(u.len() + v.len());
    shuffle_rec(u, v, sd, &mut cur, false, &mut out);
    out
}

fn shuffle_rec(u: &[usize], v: &[usize], sd: &[i64], cur: &mut Word, odd: bool, out: &mut Tensor) {
    if u.is_empty() || v.is_empty() {
        let mut w = cur.clone();
        w.extend_from_slice(u);
        w.extend_from_slice(v);
        out.add_term(w, &Scalar::sign(odd));
        return;
    }
    cur.push(u[0]);
    shuffle_rec(&u[1..], v, sd, cur, odd, out);
    cur.pop();
    // v[0] jumps over all remaining letters of u
    let pass: i64 = u.iter().map(|&i| sd[i]).sum::<i64>() * sd[v[0]];
    cur.push(v[0]);
    shuffle_rec(u, &v[1..], sd, cur, odd ^ (pass % 2 != 0), out);
    cur.pop();
}

/// Shuffle product extended bilinearly.
pub fn shuffle_product(u: &Tensor, v: &Tensor, sd: &[i64]) -> Tensor {
    let mut out = Tensor::new();
    for (a, c) in u.iter() {
        for (b, e) in v.iter() {
            out.add_scaled(&shuffle_words(a, b, sd), &(c * e));
        }
    }
    out
}

/// Σ_p Σ_{σ∈sh(p,n−p)} ±(a_σ(1)..a_σ(p)) ⊗ (a_σ(p+1)..a_σ(n)), including the trivial splits.
pub fn shuffle_coproduct(w: &[usize], sd: &[i64]) -> Lin<(Word, Word)> {
    let n = w.len();
    let mut out = Lin::new();
    for mask in 0u64..(1u64 << n) {
        let left: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let right: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 0).collect();
        // sign of moving the selected letters in front, keeping relative order
        let mut odd = false;
        for &r in &right {
            for &l in &left {
                if l > r && sd[w[l]] * sd[w[r]] % 2 != 0 {
                    odd = !odd;
                }
            }
        }
        let lw: Word = left.iter().map(|&i| w[i]).collect();
        let rw: Word = right.iter().map(|&i| w[i]).collect();
        out.add_term((lw, rw), &Scalar::sign(odd));
    }
    out
}

/// Deconcatenation Σ_k [a₁..a_k] ⊗ [a_{k+1}..a_n].
pub fn deconcatenate(w: &[usize]) -> Lin<(Word, Word)> {
    (0..=w.len()).map(|k| ((w[..k].to_vec(), w[k..].to_vec()), Scalar::int(1))).collect()
}

/// Words over letters of nonzero shifted degree, all of one sign, with |total| ≤ max.
fn enumerate_words(sd: &[i64], max: i64) -> Vec<Word> {
    let mut out = vec![vec![]];
    let mut frontier: Vec<(Word, i64)> = vec![(vec![], 0)];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (w, t) in &frontier {
            for (i, &d) in sd.iter().enumerate() {
                let t2 = t + d;
                if t2.abs() <= max {
                    let mut w2 = w.clone();
                    w2.push(i);
                    out.push(w2.clone());
                    next.push((w2, t2));
                }
            }
        }
        frontier = next;
    }
    out
}

fn check_letters(m: &GradedModule, sd: &[i64]) -> Result<(), BarError> {
    let pos = sd.iter().any(|&d| d > 0);
    for (i, &d) in sd.iter().enumerate() {
        if d == 0 || (d > 0) != pos {
            return Err(BarError::Unbounded(m.name(i).to_string(), d));
        }
    }
    Ok(())
}

/// Complex spanned by tensor words, with its truncated differential.
#[derive(Clone, Debug)]
pub struct WordComplex {
    pub letters: GradedModule,
    /// Degree of each letter after the shift.
    pub sd: Vec<i64>,
    pub words: Vec<Word>,
    pub index: BTreeMap<Word, usize>,
    pub complex: ChainComplex,
    pub max_degree: i64,
}

impl WordComplex {
    fn build(letters: GradedModule, sd: Vec<i64>, max: i64, d: impl Fn(&Word) -> Tensor) -> WordComplex {
        let words = enumerate_words(&sd, max);
        let deg = |w: &Word| w.iter().map(|&i| sd[i]).sum::<i64>();
        let names = words.iter().map(|w| (fmt_word(&letters, w), deg(w)));
        let module = GradedModule::new(letters.field, names).unwrap();
        let index: BTreeMap<Word, usize> = words.iter().map(|w| (w.clone(), module.index_of(&fmt_word(&letters, w)).unwrap())).collect();
        let mut dm = Matrix::zero(module.dim(), module.dim());
        for w in &words {
            let col: Vector = d(w).iter().filter_map(|(x, c)| index.get(x).map(|&i| (i, c.clone()))).collect();
            dm.set_column(index[w], col);
        }
        let complex = ChainComplex::new(module, dm).expect("word differential squares to zero");
        let mut sorted = words;
        sorted.sort_by_key(|w| index[w]);
        WordComplex { letters, sd, words: sorted, index, complex, max_degree: max }
    }

    pub fn word_degree(&self, w: &[usize]) -> i64 {
        w.iter().map(|&i| self.sd[i]).sum()
    }

    /// Words outside the truncation are dropped.
    pub fn to_vector(&self, t: &Tensor) -> Vector {
        t.iter().filter_map(|(w, c)| self.index.get(w).map(|&i| (i, c.clone()))).collect()
    }

    pub fn to_tensor(&self, v: &Vector) -> Tensor {
        v.map_keys(|&i| self.words[i].clone())
    }

    pub fn homology(&self) -> HomologyData {
        homology(&self.complex)
    }

    /// Ranks in every degree strictly inside the truncation window.
    pub fn reliable_ranks(&self) -> BTreeMap<i64, usize> {
        let h = self.homology();
        let m = &self.complex.module;
        m.degrees().filter(|d| d.abs() < self.max_degree).map(|d| (d, h.rank(d))).collect()
    }
}

pub fn fmt_word(m: &GradedModule, w: &[usize]) -> String {
    let names: Vec<&str> = w.iter().map(|&i| m.name(i)).collect();
    format!("[{}]", names.join("|"))
}

/// Bar construction of an A∞-algebra on its non-unit part.
#[derive(Clone, Debug)]
pub struct BarComplex {
    pub base: AInfinity,
    pub words: WordComplex,
    b: Comps,
}

impl BarComplex {
    /// d_B[a₁..a_n] = Σ ±[a₁..a_r, b_s(a_{r+1}..a_{r+s}), ..], untruncated.
    pub fn d_word(&self, w: &[usize]) -> Tensor {
        insert_op(w, &self.base.module, &self.b, 1, w.len())
    }

    pub fn d_tensor(&self, t: &Tensor) -> Tensor {
        let mut out = Tensor::new();
        for (w, c) in t.iter() {
            out.add_scaled(&self.d_word(w), c);
        }
        out
    }

    pub fn sd(&self) -> &[i64] {
        &self.words.sd
    }

    /// d² vanishes on every word in the truncation.
    pub fn check_d_squared(&self) -> bool {
        self.words.words.iter().all(|w| self.d_tensor(&self.d_word(w)).is_zero())
    }
}

pub fn bar_construction(m: &AInfinity, max_degree: i64) -> Result<BarComplex, BarError> {
    let base = if m.unit.is_some() { m.reduced().0 } else { m.clone() };
    let sd: Vec<i64> = (0..base.module.dim()).map(|i| base.module.degree(i) - 1).collect();
    check_letters(&base.module, &sd)?;
    let n = base.truncation.max(1);
    let b = pad(&base.shifted(), n, |_| 1);
    let proto = BarComplex { base: base.clone(), words: WordComplex::build(base.module.clone(), sd.clone(), 0, |_| Tensor::new()), b };
    let words = WordComplex::build(base.module.clone(), sd, max_degree, |w| proto.d_word(w));
    Ok(BarComplex { words, ..proto })
}

/// Ranks of H(BM) in the reliable degrees together with representatives.
#[derive(Clone, Debug)]
pub struct BarHomology {
    pub ranks: BTreeMap<i64, usize>,
    pub representatives: BTreeMap<i64, Vec<Tensor>>,
}

pub fn bar_homology(m: &AInfinity, max_degree: i64) -> Result<BarHomology, BarError> {
    let bar = bar_construction(m, max_degree)?;
    let h = bar.words.homology();
    let mut ranks = BTreeMap::new();
    let mut representatives = BTreeMap::new();
    for d in bar.words.complex.module.degrees() {
        if d.abs() >= max_degree {
            continue;
        }
        ranks.insert(d, h.rank(d));
        let reps = h.module.in_degree(d).iter().map(|&i| bar.words.to_tensor(h.f1.column(i))).collect();
        representatives.insert(d, reps);
    }
    for d in 0..max_degree {
        ranks.entry(d).or_insert(0);
    }
    Ok(BarHomology { ranks, representatives })
}

/// Whether d_B is a derivation of the shuffle product on all word pairs within the truncation.
pub fn check_bar_bialgebra(m: &AInfinity, max_degree: i64) -> Result<(bool, Option<(Word, Word)>), BarError> {
    let bar = bar_construction(m, max_degree)?;
    let sd = bar.sd().to_vec();
    let words: Vec<&Word> = bar.words.words.iter().filter(|w| !w.is_empty()).collect();
    for u in &words {
        for v in &words {
            if bar.words.word_degree(u) + bar.words.word_degree(v) + 1 > max_degree {
                continue;
            }
            let uv = shuffle_words(u, v, &sd);
            let lhs = bar.d_tensor(&uv);
            let tu = Tensor::single((*u).clone(), Scalar::int(1));
            let tv = Tensor::single((*v).clone(), Scalar::int(1));
            let mut rhs = shuffle_product(&bar.d_word(u), &tv, &sd);
            let s = Scalar::sign(bar.words.word_degree(u) % 2 != 0);
            rhs.add_scaled(&shuffle_product(&tu, &bar.d_word(v), &sd), &s);
            if lhs != rhs {
                return Ok((false, Some(((*u).clone(), (*v).clone()))));
            }
        }
    }
    Ok((true, None))
}

/// B(f)[a₁..a_n] = Σ [f_{k1}(..), …, f_{kt}(..)] between truncated bar complexes.
#[derive(Clone, Debug)]
pub struct BarMap {
    pub source: BarComplex,
    pub target: BarComplex,
    comps: Comps,
}

impl BarMap {
    pub fn apply_word(&self, w: &[usize]) -> Tensor {
        if w.is_empty() {
            return Tensor::single(vec![], Scalar::int(1));
        }
        let t = blocks(w, &self.comps, w.len());
        let mut out = Tensor::new();
        for x in t.iter().skip(1) {
            out.add_assign(x);
        }
        out
    }

    pub fn apply(&self, t: &Tensor) -> Tensor {
        let mut out = Tensor::new();
        for (w, c) in t.iter() {
            out.add_scaled(&self.apply_word(w), c);
        }
        out
    }

    pub fn matrix(&self) -> Matrix {
        let cols = self.source.words.words.iter().map(|w| self.target.words.to_vector(&self.apply_word(w))).collect();
        Matrix::from_columns(self.target.words.complex.module.dim(), cols)
    }

    /// F d_B = d_B' F on every source word.
    pub fn commutes_with_d(&self) -> bool {
        self.source.words.words.iter().all(|w| {
            let l = self.apply(&self.source.d_word(w));
            let r = self.target.d_tensor(&self.apply_word(w));
            l == r
        })
    }

    /// Δ F = (F ⊗ F) Δ for deconcatenation.
    pub fn commutes_with_diag(&self) -> bool {
        self.source.words.words.iter().all(|w| {
            let mut l = Lin::new();
            for (x, c) in self.apply_word(w).iter() {
                l.add_scaled(&deconcatenate(x), c);
            }
            let mut r: Lin<(Word, Word)> = Lin::new();
            for ((a, b), c) in deconcatenate(w).iter() {
                for (fa, ca) in self.apply_word(a).iter() {
                    for (fb, cb) in self.apply_word(b).iter() {
                        r.add_term((fa.clone(), fb.clone()), &(&(c * ca) * cb));
                    }
                }
            }
            l == r
        })
    }
}

fn reduce_morphism(f: &Morphism) -> Comps {
    let comps = pad(&f.shifted(), f.truncation, |_| 0);
    let (Some(us), ut) = (f.source.unit, f.target.unit) else {
        return comps;
    };
    let keep_s: Vec<usize> = (0..f.source.module.dim()).filter(|&i| i != us).collect();
    let keep_t: Vec<usize> = (0..f.target.module.dim()).filter(|&i| Some(i) != ut).collect();
    let back_t: BTreeMap<usize, usize> = keep_t.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    comps
        .iter()
        .map(|op| {
            let mut r = crate::graded::MultiOp::new(op.arity, op.degree);
            for (w, v) in &op.table {
                if w.contains(&us) {
                    continue;
                }
                let w2: Word = w.iter().map(|i| keep_s.iter().position(|x| x == i).unwrap()).collect();
                let v2: Vector = v.iter().filter_map(|(i, c)| back_t.get(i).map(|&k| (k, c.clone()))).collect();
                r.set(w2, v2);
            }
            r
        })
        .collect()
}

pub fn bar_morphism(f: &Morphism, max_degree: i64) -> Result<BarMap, BarError> {
    let source = bar_construction(&f.source, max_degree)?;
    let target = bar_construction(&f.target, max_degree)?;
    Ok(BarMap { source, target, comps: reduce_morphism(f) })
}

/// Cobar construction of a coaugmented dg coalgebra on its coaugmentation coideal.
#[derive(Clone, Debug)]
pub struct CobarComplex {
    pub words: WordComplex,
    /// Reduced part: differential and reduced diagonal on the letters.
    d: Vec<Vector>,
    rdiag: Vec<Tensor>,
    /// Letter index → basis index in the original coalgebra.
    pub letter_of: Vec<usize>,
}

impl CobarComplex {
    /// d_Ω as a derivation: s⁻¹dc + Σ (−1)^{|c'|} s⁻¹c' ⊗ s⁻¹c'' on each letter.
    pub fn d_word(&self, w: &[usize]) -> Tensor {
        let mut out = Tensor::new();
        let mut pre = 0i64;
        for (i, &c) in w.iter().enumerate() {
            let s = Scalar::sign(pre % 2 != 0);
            for (x, v) in self.d[c].iter() {
                let mut w2 = w[..i].to_vec();
                w2.push(*x);
                w2.extend_from_slice(&w[i + 1..]);
                out.add_term(w2, &(v * &s));
            }
            for (pair, v) in self.rdiag[c].iter() {
                let deg_left = self.words.letters.degree(pair[0]);
                let s2 = Scalar::sign(deg_left % 2 != 0);
                let mut w2 = w[..i].to_vec();
                w2.extend_from_slice(pair);
                w2.extend_from_slice(&w[i + 1..]);
                out.add_term(w2, &(&(v * &s) * &s2));
            }
            pre += self.words.sd[c];
        }
        out
    }

    pub fn d_tensor(&self, t: &Tensor) -> Tensor {
        let mut out = Tensor::new();
        for (w, c) in t.iter() {
            out.add_scaled(&self.d_word(w), c);
        }
        out
    }

    pub fn check_d_squared(&self) -> bool {
        self.words.words.iter().all(|w| self.d_tensor(&self.d_word(w)).is_zero())
    }

    /// Concatenation product.
    pub fn product(&self, u: &Tensor, v: &Tensor) -> Tensor {
        let mut out = Tensor::new();
        for (a, c) in u.iter() {
            for (b, e) in v.iter() {
                let mut w = a.clone();
                w.extend_from_slice(b);
                out.add_term(w, &(c * e));
            }
        }
        out
    }
}

/// Coaugmentation: the unique degree-0 grouplike basis element, if any.
pub fn coaugmentation(c: &DgCoalgebra) -> Option<usize> {
    let m = c.module();
    let cands: Vec<usize> = m.in_degree(0).iter().copied().filter(|&i| c.comul[i] == Tensor::single(vec![i, i], Scalar::int(1))).collect();
    (cands.len() == 1).then(|| cands[0])
}

pub fn cobar_construction(c: &DgCoalgebra, max_degree: i64) -> Result<CobarComplex, BarError> {
    let m = c.module();
    let u = coaugmentation(c).ok_or_else(|| BarError::NotReduced("no unique coaugmentation".into()))?;
    let keep: Vec<usize> = (0..m.dim()).filter(|&i| i != u).collect();
    let back: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let letters = GradedModule::new(m.field, keep.iter().map(|&i| (m.name(i).to_string(), m.degree(i)))).unwrap();
    // letters keep the relative order of the source basis
    let sd: Vec<i64> = (0..letters.dim()).map(|i| letters.degree(i) + 1).collect();
    check_letters(&letters, &sd)?;
    let mut d = Vec::new();
    let mut rdiag = Vec::new();
    for &i in &keep {
        if !c.complex.d.column(i).get(&u).map_or(true, |x| x.is_zero()) {
            return Err(BarError::NotReduced(format!("d({}) hits the coaugmentation", m.name(i))));
        }
        d.push(c.complex.d.column(i).map_keys(|k| back[k]));
        let mut t = Tensor::new();
        for (w, v) in c.comul[i].iter() {
            match (w[0] == u, w[1] == u) {
                (true, true) => return Err(BarError::NotReduced(format!("Δ({}) has a 1⊗1 term", m.name(i)))),
                (true, false) | (false, true) => {
                    if !(w[0] == u && w[1] == i || w[1] == u && w[0] == i) || !v.is_one() {
                        return Err(BarError::NotReduced(format!("Δ({}) is not counital", m.name(i))));
                    }
                }
                (false, false) => t.add_term(vec![back[&w[0]], back[&w[1]]], v),
            }
        }
        rdiag.push(t);
    }
    let proto = CobarComplex {
        words: WordComplex::build(letters.clone(), sd.clone(), 0, |_| Tensor::new()),
        d,
        rdiag,
        letter_of: keep,
    };
    let words = WordComplex::build(letters, sd, max_degree, |w| proto.d_word(w));
    Ok(CobarComplex { words, ..proto })
}

/// Ranks of H(ΩC) in the reliable degrees.
pub fn cobar_homology(c: &DgCoalgebra, max_degree: i64) -> Result<BTreeMap<i64, usize>, BarError> {
    Ok(cobar_construction(c, max_degree)?.words.reliable_ranks())
}
