//! Reference numbers computed without localization.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{binomial, int, rat, Rational};

/// Degree-d rational plane curves through 3d − 1 general points.
pub fn kontsevich(d: u32) -> BigInt {
    kontsevich_table(d).pop().unwrap_or_else(BigInt::zero)
}

/// N_0..=N_d by Kontsevich's recursion (N_0 = 0).
pub fn kontsevich_table(d: u32) -> Vec<BigInt> {
    let mut n = vec![BigInt::zero(); d as usize + 1];
    if d >= 1 {
        n[1] = BigInt::one();
    }
    for k in 2..=d as usize {
        let kk = k as i64;
        let mut acc = BigInt::zero();
        for d1 in 1..k {
            let d2 = k - d1;
            let (a, b) = (d1 as i64, d2 as i64);
            let c1 = binomial((3 * kk - 4) as u32, (3 * a - 2) as u32);
            let c2 = binomial((3 * kk - 4) as u32, (3 * a - 1) as u32);
            let w = BigInt::from(a * a * b * b) * c1 - BigInt::from(a * a * a * b) * c2;
            acc += &n[d1] * &n[d2] * w;
        }
        n[k] = acc;
    }
    n
}

/// The recursion written with the roles of the two halves exchanged; equal to
/// [`kontsevich`] term for term after reindexing.
pub fn kontsevich_swapped(d: u32) -> BigInt {
    let table = kontsevich_table(d.saturating_sub(1));
    if d <= 1 {
        return kontsevich(d);
    }
    let k = d as i64;
    let mut acc = BigInt::zero();
    for d2 in 1..d as usize {
        let d1 = d as usize - d2;
        let (a, b) = (d1 as i64, d2 as i64);
        let c1 = binomial((3 * k - 4) as u32, (3 * b - 2) as u32);
        let c2 = binomial((3 * k - 4) as u32, (3 * b - 1) as u32);
        let w = BigInt::from(a * a * b * b) * c1 - BigInt::from(b * b * b * a) * c2;
        acc += &table[d1] * &table[d2] * w;
    }
    acc
}

/// Genus-0 primary invariants of P^r from associativity, the divisor axiom and
/// the three-point degree-zero numbers.
pub struct ProjectiveWdvv {
    r: u32,
    memo: HashMap<(u32, Vec<u32>), Rational>,
}

impl ProjectiveWdvv {
    pub fn new(r: u32) -> Self {
        assert!(r >= 1, "P^0 has no curves");
        ProjectiveWdvv { r, memo: HashMap::new() }
    }

    pub fn dim(&self) -> u32 {
        self.r
    }

    /// ⟨H^{a_1}, …, H^{a_n}⟩_{0,n,d}.
    pub fn invariant(&mut self, d: u32, codims: &[u32]) -> Rational {
        let mut key = codims.to_vec();
        key.sort_unstable();
        self.get(d, key)
    }

    fn get(&mut self, d: u32, key: Vec<u32>) -> Rational {
        let r = self.r as i64;
        let n = key.len() as i64;
        let total: i64 = key.iter().map(|&a| a as i64).sum();
        if total != (r + 1) * d as i64 + r - 3 + n || key.iter().any(|&a| a > self.r) {
            return Rational::zero();
        }
        if d == 0 {
            return if n == 3 { Rational::one() } else { Rational::zero() };
        }
        if key.first() == Some(&0) {
            return Rational::zero();
        }
        if key.first() == Some(&1) {
            return int(d as i64) * self.get(d, key[1..].to_vec());
        }
        if let Some(v) = self.memo.get(&(d, key.clone())) {
            return v.clone();
        }
        let v = match key.len() {
            0 => Rational::one(), // only P¹ in degree one passes the dimension check
            1 => Rational::zero(),
            2 => Rational::one(), // a line through two points
            _ => self.reconstruct(d, &key),
        };
        self.memo.insert((d, key), v.clone());
        v
    }

    /// Associativity for (H^{a−1}, H | H^b, H^c) against (H^{a−1}, H^b | H, H^c)
    /// with a the smallest and c the largest codimension, solved for the term
    /// ⟨H^a, H^b, H^c, S⟩_d.
    fn reconstruct(&mut self, d: u32, key: &[u32]) -> Rational {
        let a = key[0];
        let c = key[key.len() - 1];
        let b = key[1];
        let rest: Vec<u32> = key[2..key.len() - 1].to_vec();
        let g1 = [a - 1, 1, b, c];
        let g2 = [a - 1, b, 1, c];
        let rhs = self.split_sum(d, &g2, &rest, false);
        let lhs = self.split_sum(d, &g1, &rest, true);
        rhs - lhs
    }

    /// Σ_{d1+d2=d} Σ_{S1⊔S2=S} Σ_e ⟨γ1,γ2,S1,H^e⟩_{d1}⟨H^{r−e},γ3,γ4,S2⟩_{d2},
    /// optionally leaving out the part with d1 = 0 and S1 = ∅.
    fn split_sum(&mut self, d: u32, g: &[u32; 4], rest: &[u32], skip_target: bool) -> Rational {
        let mut types: BTreeMap<u32, u32> = BTreeMap::new();
        for &x in rest {
            *types.entry(x).or_insert(0) += 1;
        }
        let types: Vec<(u32, u32)> = types.into_iter().collect();
        let mut acc = Rational::zero();
        let mut take = vec![0u32; types.len()];
        loop {
            let mut s1 = Vec::new();
            let mut s2 = Vec::new();
            let mut mult = BigInt::one();
            for ((x, cnt), &t) in types.iter().zip(&take) {
                s1.extend(std::iter::repeat_n(*x, t as usize));
                s2.extend(std::iter::repeat_n(*x, (cnt - t) as usize));
                mult *= binomial(*cnt, t);
            }
            for d1 in 0..=d {
                if skip_target && d1 == 0 && s1.is_empty() {
                    continue;
                }
                let d2 = d - d1;
                for e in 0..=self.r {
                    let mut left = vec![g[0], g[1], e];
                    left.extend_from_slice(&s1);
                    left.sort_unstable();
                    let l = self.get(d1, left);
                    if l.is_zero() {
                        continue;
                    }
                    let mut right = vec![self.r - e, g[2], g[3]];
                    right.extend_from_slice(&s2);
                    right.sort_unstable();
                    let rr = self.get(d2, right);
                    acc += l * rr * Rational::from_integer(mult.clone());
                }
            }
            let mut i = 0;
            while i < take.len() {
                if take[i] < types[i].1 {
                    take[i] += 1;
                    break;
                }
                take[i] = 0;
                i += 1;
            }
            if i == take.len() {
                break;
            }
        }
        acc
    }
}

/// Plane-curve counts from the general associativity reconstruction on P².
pub fn wdvv_p2(d: u32) -> Rational {
    let mut o = ProjectiveWdvv::new(2);
    let pts = vec![2; (3 * d).saturating_sub(1) as usize];
    o.invariant(d, &pts)
}

/// Classical enumerative checks for quantum cohomology of projective spaces.
pub fn qh_pn_checks() -> Vec<(String, Rational, Rational)> {
    let mut out = Vec::new();
    let mut p1 = ProjectiveWdvv::new(1);
    out.push(("P1 <pt,pt>_1".to_string(), p1.invariant(1, &[1, 1]), int(1)));
    let mut p3 = ProjectiveWdvv::new(3);
    out.push(("P3 <pt,pt>_1".to_string(), p3.invariant(1, &[3, 3]), int(1)));
    out.push(("P3 <H^2,H^2,H^2,H^2>_1".to_string(), p3.invariant(1, &[2, 2, 2, 2]), int(2)));
    let mut p2 = ProjectiveWdvv::new(2);
    out.push(("P2 <pt^5>_2".to_string(), p2.invariant(2, &[2; 5]), int(1)));
    out
}

/// Schubert classes σ_{i,j} (N−2 ≥ i ≥ j ≥ 0) of G(2, N).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SchubertClass {
    terms: BTreeMap<(u32, u32), BigInt>,
}

pub struct Grassmannian2 {
    n: u32,
}

impl Grassmannian2 {
    /// Two-planes in C^n.
    pub fn new(n: u32) -> Self {
        assert!(n >= 2);
        Grassmannian2 { n }
    }

    pub fn dim(&self) -> u32 {
        2 * (self.n - 2)
    }

    pub fn one(&self) -> SchubertClass {
        let mut terms = BTreeMap::new();
        terms.insert((0, 0), BigInt::one());
        SchubertClass { terms }
    }

    /// Pieri with σ₁.
    pub fn times_sigma1(&self, c: &SchubertClass) -> SchubertClass {
        let top = self.n - 2;
        let mut terms: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
        for (&(i, j), v) in &c.terms {
            if i < top {
                *terms.entry((i + 1, j)).or_insert_with(BigInt::zero) += v;
            }
            if j < i {
                *terms.entry((i, j + 1)).or_insert_with(BigInt::zero) += v;
            }
        }
        terms.retain(|_, v| !v.is_zero());
        SchubertClass { terms }
    }

    /// Pieri with σ₁₁.
    pub fn times_sigma11(&self, c: &SchubertClass) -> SchubertClass {
        let top = self.n - 2;
        let terms =
            c.terms.iter().filter(|(&(i, _), _)| i < top).map(|(&(i, j), v)| ((i + 1, j + 1), v.clone())).collect();
        SchubertClass { terms }
    }

    /// ∫ σ₁^p σ₁₁^q.
    pub fn integrate_monomial(&self, p: u32, q: u32) -> BigInt {
        let mut c = self.one();
        for _ in 0..q {
            c = self.times_sigma11(&c);
        }
        for _ in 0..p {
            c = self.times_sigma1(&c);
        }
        let top = self.n - 2;
        c.terms.get(&(top, top)).cloned().unwrap_or_else(BigInt::zero)
    }

    /// ∫ e(Sym^d S^∨), with c(S^∨) = 1 + σ₁ + σ₁₁.
    pub fn euler_sym_dual(&self, d: u32) -> BigInt {
        if d + 1 != self.dim() {
            return BigInt::zero();
        }
        // ∏_{k=0}^{d} (k x₁ + (d−k) x₂) as coefficients of x₁^i x₂^j
        let mut poly: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
        poly.insert((0, 0), BigInt::one());
        for k in 0..=d {
            let mut next: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
            for (&(i, j), v) in &poly {
                if k > 0 {
                    *next.entry((i + 1, j)).or_insert_with(BigInt::zero) += v * BigInt::from(k);
                }
                if d > k {
                    *next.entry((i, j + 1)).or_insert_with(BigInt::zero) += v * BigInt::from(d - k);
                }
            }
            poly = next;
        }
        // rewrite in e₁ = σ₁, e₂ = σ₁₁ by peeling off leading terms
        let mut total = BigInt::zero();
        loop {
            poly.retain(|_, v| !v.is_zero());
            let Some((&(i, j), v)) = poly.iter().next_back() else { break };
            let v = v.clone();
            let (p, q) = (i - j, j);
            total += &v * self.integrate_monomial(p, q);
            // subtract v e₁^p e₂^q
            for t in 0..=p {
                let key = (t + q, p - t + q);
                *poly.entry(key).or_insert_with(BigInt::zero) -= &v * binomial(p, t);
            }
        }
        total
    }
}

/// Lines on a general degree-(2N−5) hypersurface in P^{N−1}.
pub fn lines_on_hypersurface(n: u32) -> BigInt {
    let g = Grassmannian2::new(n);
    g.euler_sym_dual(2 * n - 5)
}

/// Multiple-cover contribution of a rigid (−1,−1) curve in degree d.
pub fn aspinwall_morrison(d: u32) -> Rational {
    assert!(d >= 1);
    rat(1, (d as i64).pow(3))
}
