//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

pub mod massey {
    use ainf::complexes::DgAlgebra;
    use ainf::exactlin::{Scalar, Vector};
    use num::{ToPrimitive, Zero};

    /// Dense arithmetic over 𝔽p on one degree of a dg algebra.
    pub struct Fp {
        pub p: u64,
    }

    impl Fp {
        pub fn of(&self, s: &Scalar) -> u64 {
            match s {
                Scalar::Fp(v, _) => *v,
                Scalar::Q(q) => {
                    let m = |x: &num::BigInt| {
                        let r = x % num::BigInt::from(self.p);
                        let r = if r < num::BigInt::zero() { r + num::BigInt::from(self.p) } else { r };
                        r.to_u64().unwrap()
                    };
                    self.mul(m(q.numer()), self.inv(m(q.denom())))
                }
            }
        }
        pub fn mul(&self, a: u64, b: u64) -> u64 {
            a * b % self.p
        }
        pub fn inv(&self, a: u64) -> u64 {
            (1..self.p).find(|b| a * b % self.p == 1).expect("invertible")
        }
        pub fn rank(&self, mut rows: Vec<Vec<u64>>) -> usize {
            let n = rows.first().map_or(0, |r| r.len());
            let mut r = 0;
            for c in 0..n {
                let Some(k) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
                rows.swap(r, k);
                let inv = self.inv(rows[r][c]);
                for i in 0..rows.len() {
                    if i != r && rows[i][c] != 0 {
                        let f = self.mul(rows[i][c], inv);
                        for j in 0..n {
                            rows[i][j] = (rows[i][j] + self.p * self.p - self.mul(f, rows[r][j])) % self.p;
                        }
                    }
                }
                r += 1;
            }
            r
        }
    }

    /// A dg algebra over 𝔽p as dense tables indexed by the global basis.
    pub struct Dense {
        pub f: Fp,
        pub degrees: Vec<i64>,
        pub d: Vec<Vec<u64>>,
        pub mul: Vec<Vec<Vec<u64>>>,
    }

    impl Dense {
        pub fn new(a: &DgAlgebra, p: u64) -> Dense {
            let f = Fp { p };
            let n = a.module().dim();
            let dense = |v: &Vector| {
                let mut out = vec![0; n];
                for (i, c) in v.iter() {
                    out[*i] = f.of(c);
                }
                out
            };
            let d = (0..n).map(|j| dense(a.d().column(j))).collect();
            let mul = (0..n).map(|i| (0..n).map(|j| dense(&a.mul_basis(i, j))).collect()).collect();
            Dense { f, degrees: (0..n).map(|i| a.module().degree(i)).collect(), d, mul }
        }

        pub fn dense(&self, v: &Vector) -> Vec<u64> {
            let mut out = vec![0; self.degrees.len()];
            for (i, c) in v.iter() {
                out[*i] = self.f.of(c);
            }
            out
        }

        fn in_degree(&self, k: i64) -> Vec<usize> {
            (0..self.degrees.len()).filter(|&i| self.degrees[i] == k).collect()
        }

        fn add(&self, a: &[u64], b: &[u64], c: u64) -> Vec<u64> {
            a.iter().zip(b).map(|(x, y)| (x + self.f.mul(c, *y)) % self.f.p).collect()
        }

        pub fn dv(&self, v: &[u64]) -> Vec<u64> {
            let mut out = vec![0; v.len()];
            for (j, c) in v.iter().enumerate() {
                if *c != 0 {
                    out = self.add(&out, &self.d[j], *c);
                }
            }
            out
        }

        pub fn prod(&self, u: &[u64], v: &[u64]) -> Vec<u64> {
            let mut out = vec![0; u.len()];
            for (i, a) in u.iter().enumerate().filter(|(_, a)| **a != 0) {
                for (j, b) in v.iter().enumerate().filter(|(_, b)| **b != 0) {
                    out = self.add(&out, &self.mul[i][j], self.f.mul(*a, *b));
                }
            }
            out
        }

        /// (−1)^{1+k} v for v of degree k.
        pub fn bar(&self, v: &[u64], k: i64) -> Vec<u64> {
            if k % 2 == 0 {
                v.iter().map(|x| (self.f.p - x) % self.f.p).collect()
            } else {
                v.to_vec()
            }
        }

        /// All vectors of degree k with du = target.
        pub fn primitives(&self, k: i64, target: &[u64]) -> Vec<Vec<u64>> {
            let idx = self.in_degree(k);
            let p = self.f.p;
            let total = p.pow(idx.len() as u32);
            let mut out = Vec::new();
            for code in 0..total {
                let mut v = vec![0; self.degrees.len()];
                let mut c = code;
                for &i in &idx {
                    v[i] = c % p;
                    c /= p;
                }
                if self.dv(&v) == target {
                    out.push(v);
                }
            }
            out
        }

        /// Whether v of degree k is a boundary.
        pub fn is_boundary(&self, v: &[u64], k: i64) -> bool {
            let below = self.in_degree(k - 1);
            let idx = self.in_degree(k);
            let rows: Vec<Vec<u64>> = below.iter().map(|&j| idx.iter().map(|&i| self.d[j][i]).collect()).collect();
            let mut with = rows.clone();
            with.push(idx.iter().map(|&i| v[i]).collect());
            self.f.rank(rows) == self.f.rank(with)
        }

        /// Every representative ū·c + ā·v with du = ā·b, dv = b̄·c, where
        /// x̄ = (−1)^{1+|x|} x. None if the triple is not defined.
        pub fn massey_set(&self, a: (&[u64], i64), b: (&[u64], i64), c: (&[u64], i64)) -> Option<Vec<Vec<u64>>> {
            let ab = self.prod(&self.bar(a.0, a.1), b.0);
            let bc = self.prod(&self.bar(b.0, b.1), c.0);
            let us = self.primitives(a.1 + b.1 - 1, &ab);
            let vs = self.primitives(b.1 + c.1 - 1, &bc);
            if us.is_empty() || vs.is_empty() {
                return None;
            }
            let abar = self.bar(a.0, a.1);
            let mut out = Vec::new();
            for u in &us {
                let uc = self.prod(&self.bar(u, a.1 + b.1 - 1), c.0);
                for v in &vs {
                    out.push(self.add(&uc, &self.prod(&abar, v), 1));
                }
            }
            Some(out)
        }

        /// Whether the class of t (degree k) is represented in `set`.
        pub fn contains(&self, set: &[Vec<u64>], t: &[u64], k: i64) -> bool {
            set.iter().any(|w| self.is_boundary(&self.add(w, t, self.f.p - 1), k))
        }

        pub fn neg(&self, t: &[u64]) -> Vec<u64> {
            t.iter().map(|x| (self.f.p - x) % self.f.p).collect()
        }
    }
}

pub mod massey_check {
    use super::massey::Dense;
    use ainf::ainfty::{transfer_dga, TransferOptions};
    use ainf::complexes::DgAlgebra;
    use ainf::exactlin::{Field, Vector};
    use ainf::models::FreeCdga;

    /// Models with Massey products in even, odd and mixed degrees.
    pub fn models(p: u64) -> Vec<(&'static str, DgAlgebra)> {
        let f = Field::prime(p).unwrap();
        let mut y = FreeCdga::new(f);
        y.gen("x", 2, &[]);
        y.gen("y", 2, &[]);
        y.gen("u1", 3, &[(1, &["x", "x"])]);
        y.gen("u2", 3, &[(1, &["x", "y"])]);
        y.gen("u3", 3, &[(1, &["y", "y"])]);
        y.gen("w", 4, &[(1, &["y", "u2"]), (-1, &["x", "u3"])]);
        y.gen("v", 5, &[(1, &["y", "w"]), (1, &["u2", "u3"])]);
        let mut odd = FreeCdga::new(f);
        odd.gen("a", 3, &[]);
        odd.gen("b", 3, &[]);
        odd.gen("c", 3, &[]);
        odd.gen("t", 5, &[(1, &["a", "b"])]);
        odd.gen("s", 5, &[(1, &["b", "c"])]);
        let mut mixed = FreeCdga::new(f);
        mixed.gen("x", 2, &[]);
        mixed.gen("e", 3, &[]);
        mixed.gen("f", 3, &[]);
        mixed.gen("t", 4, &[(1, &["x", "e"])]);
        mixed.gen("s", 5, &[(1, &["e", "f"])]);
        vec![("y", y.build(7)), ("odd", odd.build(8)), ("mixed", mixed.build(8))]
    }

    /// For every defined triple of basis classes, checks
    /// m₃(a,b,c) ∈ (−1)^{|b|+1}⟨a,b,c⟩ by enumerating all defining systems.
    /// Returns (triples checked, triples with m₃ ≠ 0).
    pub fn check(a: &DgAlgebra, p: u64) -> Result<(usize, usize), String> {
        let dn = Dense::new(a, p);
        let t = transfer_dga(a, TransferOptions::default()).map_err(|e| e.to_string())?;
        let h = &t.minimal;
        let f1 = |i: usize| dn.dense(&t.morphism.comps[1].eval_owned(&[i]));
        let top = a.module().max_degree().unwrap();
        let classes: Vec<usize> = (0..h.module.dim()).filter(|&i| h.module.degree(i) > 0).collect();
        let (mut checked, mut nonzero) = (0, 0);
        for &i in &classes {
            for &j in &classes {
                for &k in &classes {
                    let (di, dj, dk) = (h.module.degree(i), h.module.degree(j), h.module.degree(k));
                    let deg = di + dj + dk - 1;
                    if deg > top || !h.ops[2].eval_owned(&[i, j]).is_zero() || !h.ops[2].eval_owned(&[j, k]).is_zero() {
                        continue;
                    }
                    let Some(set) = dn.massey_set((&f1(i), di), (&f1(j), dj), (&f1(k), dk)) else {
                        return Err(format!("products vanish in H but the triple {i},{j},{k} is undefined"));
                    };
                    let m3 = h.m(3).map(|m| m.eval_owned(&[i, j, k])).unwrap_or_else(Vector::new);
                    let mut rep = vec![0; a.module().dim()];
                    for (c, s) in m3.iter() {
                        let r = f1(*c);
                        let s = dn.f.of(s);
                        for (q, x) in rep.iter_mut().enumerate() {
                            *x = (*x + s * r[q]) % p;
                        }
                    }
                    if dj % 2 == 0 {
                        rep = dn.neg(&rep);
                    }
                    if !dn.contains(&set, &rep, deg) {
                        return Err(format!("m₃({}) not in the Massey set", h.module.format_word(&[i, j, k])));
                    }
                    checked += 1;
                    nonzero += !m3.is_zero() as usize;
                }
            }
        }
        Ok((checked, nonzero))
    }
}

pub mod bar {
    use ainf::cli::{load_algebra, parse_document, Algebra, AlgebraDocument};
    use ainf::complexes::DgAlgebra;
    use ainf::exactlin::Scalar;
    use num::{BigRational, One, Zero};
    use std::collections::BTreeMap;

    fn q(s: &Scalar) -> BigRational {
        s.as_rational().expect("rational algebra").clone()
    }

    pub fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
        let n = rows.first().map_or(0, |r| r.len());
        let mut r = 0;
        for c in 0..n {
            let Some(k) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
            rows.swap(r, k);
            let inv = BigRational::one() / rows[r][c].clone();
            for i in r + 1..rows.len() {
                if !rows[i][c].is_zero() {
                    let f = rows[i][c].clone() * inv.clone();
                    for j in c..n {
                        let t = rows[r][j].clone() * f.clone();
                        rows[i][j] -= t;
                    }
                }
            }
            r += 1;
        }
        r
    }

    /// Bar homology ranks of an augmented dg algebra (unit at `unit`) in bar
    /// degrees 0..max, from dense matrices, and whether d² = 0 there. b₁(sx) = −s(dx),
    /// b₂(sx,sy) = (−1)^{|x|} s(xy), extended with Koszul signs.
    pub fn bar_ranks(a: &DgAlgebra, unit: usize, max: i64) -> (BTreeMap<i64, usize>, bool) {
        let m = a.module();
        let letters: Vec<usize> = (0..m.dim()).filter(|&i| i != unit).collect();
        let sd = |x: usize| m.degree(x) - 1;
        assert!(letters.iter().all(|&x| sd(x) >= 1), "connected input");
        let mut by_deg: BTreeMap<i64, Vec<Vec<usize>>> = BTreeMap::new();
        by_deg.entry(0).or_default().push(vec![]);
        let mut frontier = vec![(vec![], 0i64)];
        while let Some((w, d)) = frontier.pop() {
            for &x in &letters {
                let d2 = d + sd(x);
                if d2 <= max {
                    let mut w2: Vec<usize> = w.clone();
                    w2.push(x);
                    by_deg.entry(d2).or_default().push(w2.clone());
                    frontier.push((w2, d2));
                }
            }
        }
        for ws in by_deg.values_mut() {
            ws.sort();
        }
        let index = |d: i64, w: &Vec<usize>| by_deg.get(&d).and_then(|ws| ws.binary_search(w).ok());
        let sign = |e: i64| if e.rem_euclid(2) == 0 { BigRational::one() } else { -BigRational::one() };
        let dmat = |d: i64| -> Vec<Vec<BigRational>> {
            let src = by_deg.get(&d).cloned().unwrap_or_default();
            let tgt_len = by_deg.get(&(d + 1)).map_or(0, |v| v.len());
            let mut rows = Vec::new();
            for w in &src {
                let mut col = vec![BigRational::zero(); tgt_len];
                let mut eps = 0;
                for i in 0..w.len() {
                    for (y, c) in a.d().column(w[i]).iter() {
                        let mut w2 = w.clone();
                        w2[i] = *y;
                        if let Some(k) = index(d + 1, &w2) {
                            col[k] -= sign(eps) * q(c);
                        }
                    }
                    if i + 1 < w.len() {
                        let p = a.mul_basis(w[i], w[i + 1]);
                        for (y, c) in p.iter() {
                            if *y == unit {
                                continue;
                            }
                            let mut w2: Vec<usize> = w[..i].to_vec();
                            w2.push(*y);
                            w2.extend_from_slice(&w[i + 2..]);
                            if let Some(k) = index(d + 1, &w2) {
                                col[k] += sign(eps + m.degree(w[i])) * q(c);
                            }
                        }
                    }
                    eps += sd(w[i]);
                }
                rows.push(col);
            }
            rows
        };
        let mats: Vec<Vec<Vec<BigRational>>> = (0..max).map(dmat).collect();
        let mut squares_zero = true;
        for d in 0..max as usize - 1 {
            for row in &mats[d] {
                for k in 0..mats[d + 1].first().map_or(0, |r| r.len()) {
                    let mut s = BigRational::zero();
                    for (j, c) in row.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                        s += c.clone() * mats[d + 1][j][k].clone();
                    }
                    squares_zero &= s.is_zero();
                }
            }
        }
        let mut ranks = BTreeMap::new();
        let mut prev_rank = 0;
        for d in 0..max {
            let r = rank(mats[d as usize].clone());
            let dim = by_deg.get(&d).map_or(0, |v| v.len());
            ranks.insert(d, dim - r - prev_rank);
            prev_rank = r;
        }
        (ranks, squares_zero)
    }

    /// A non-minimal dg algebra with the cohomology of S³.
    pub fn s3_model() -> DgAlgebra {
        let doc: AlgebraDocument = parse_document(
            r#"{"field": "Q",
                "basis": [["1", 0], ["s", 3], ["a", 2], ["b", 3], ["c", 4], ["e", 5]],
                "differential": [["a", "b", "1"], ["c", "e", "2"]],
                "products": [["1","1","1","1"], ["1","s","s","1"], ["s","1","s","1"], ["1","a","a","1"], ["a","1","a","1"],
                             ["1","b","b","1"], ["b","1","b","1"], ["1","c","c","1"], ["c","1","c","1"], ["1","e","e","1"],
                             ["e","1","e","1"], ["a","a","c","1"], ["a","b","e","1"], ["b","a","e","1"]]}"#,
        )
        .unwrap();
        match load_algebra(&doc, None).unwrap() {
            Algebra::Dga(a) => a,
            Algebra::Ainf(_) => unreachable!(),
        }
    }
}
