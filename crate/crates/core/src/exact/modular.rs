//! Modular multivariate GCD (Brown's dense algorithm).
//!
//! Images modulo word-size primes are computed by recursive evaluation and
//! Newton interpolation, one variable at a time, then lifted to ℤ by the
//! Chinese remainder theorem and certified by trial division.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::poly::{mono_div, mono_mul, mono_var, quotient_box, Mono, Poly};

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes just below 2^62, in decreasing order.
fn primes() -> impl Iterator<Item = u64> {
    let mut n = (1u64 << 62) - 1;
    std::iter::from_fn(move || {
        while !is_prime(n) {
            n -= 2;
        }
        let p = n;
        n -= 2;
        Some(p)
    })
}

/// Sparse polynomial over ℤ/p, terms in decreasing lex order.
#[derive(Clone, Debug, PartialEq, Eq)]
struct PolyP {
    terms: Vec<(Mono, u64)>,
}

impl PolyP {
    fn zero() -> Self {
        PolyP { terms: Vec::new() }
    }

    fn constant(c: u64) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            PolyP { terms: vec![(Vec::new(), c)] }
        }
    }

    fn from_map(map: BTreeMap<Mono, u64>) -> Self {
        PolyP { terms: map.into_iter().rev().filter(|(_, c)| *c != 0).collect() }
    }

    fn from_int(a: &Poly, p: u64) -> Self {
        let pb = BigInt::from(p);
        PolyP {
            terms: a
                .terms()
                .iter()
                .map(|(m, c)| (m.clone(), c.mod_floor(&pb).to_u64().unwrap()))
                .filter(|(_, c)| *c != 0)
                .collect(),
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_empty()
    }

    fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.get(v).copied().unwrap_or(0)).max().unwrap_or(0)
    }

    fn add(&self, o: &Self, p: u64) -> Self {
        let mut map: BTreeMap<Mono, u64> = self.terms.iter().cloned().collect();
        for (m, c) in &o.terms {
            let e = map.entry(m.clone()).or_insert(0);
            *e = (*e + c) % p;
        }
        Self::from_map(map)
    }

    fn neg(&self, p: u64) -> Self {
        PolyP { terms: self.terms.iter().map(|(m, c)| (m.clone(), (p - c) % p)).collect() }
    }

    fn sub(&self, o: &Self, p: u64) -> Self {
        self.add(&o.neg(p), p)
    }

    fn scale(&self, c: u64, p: u64) -> Self {
        if c == 0 {
            return Self::zero();
        }
        PolyP { terms: self.terms.iter().map(|(m, d)| (m.clone(), mulmod(*d, c, p))).collect() }
    }

    fn mul(&self, o: &Self, p: u64) -> Self {
        let mut map: BTreeMap<Mono, u64> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let e = map.entry(mono_mul(ma, mb)).or_insert(0);
                *e = (*e + mulmod(*ca, *cb, p)) % p;
            }
        }
        Self::from_map(map)
    }

    fn lc(&self) -> u64 {
        self.terms.first().map(|t| t.1).unwrap_or(0)
    }

    fn monic(&self, p: u64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(invmod(self.lc(), p), p)
    }

    fn eval_var(&self, v: usize, a: u64, p: u64) -> Self {
        let mut map: BTreeMap<Mono, u64> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let e = if v < m2.len() { std::mem::replace(&mut m2[v], 0) } else { 0 };
            while m2.last() == Some(&0) {
                m2.pop();
            }
            let t = mulmod(*c, powmod(a, e as u64, p), p);
            let slot = map.entry(m2).or_insert(0);
            *slot = (*slot + t) % p;
        }
        Self::from_map(map)
    }

    fn coeffs_in(&self, v: usize) -> Vec<PolyP> {
        let deg = self.degree_in(v) as usize;
        let mut parts: Vec<BTreeMap<Mono, u64>> = vec![BTreeMap::new(); deg + 1];
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let e = if v < m2.len() { std::mem::replace(&mut m2[v], 0) } else { 0 };
            while m2.last() == Some(&0) {
                m2.pop();
            }
            parts[e as usize].insert(m2, *c);
        }
        parts.into_iter().map(Self::from_map).collect()
    }

    fn degree_vector(&self) -> Vec<u32> {
        let mut out: Vec<u32> = Vec::new();
        for (m, _) in &self.terms {
            if m.len() > out.len() {
                out.resize(m.len(), 0);
            }
            for (o, e) in out.iter_mut().zip(m) {
                *o = (*o).max(*e);
            }
        }
        out
    }

    fn div_exact(&self, d: &Self, p: u64) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let cap = quotient_box(&self.degree_vector(), &d.degree_vector())?;
        let (dm, dc) = d.terms[0].clone();
        let inv = invmod(dc, p);
        let mut rem: BTreeMap<Mono, u64> = self.terms.iter().cloned().collect();
        let mut quot: Vec<(Mono, u64)> = Vec::new();
        while let Some((rm, rc)) = rem.pop_last() {
            let qm = mono_div(&rm, &dm)?;
            if qm.len() > cap.len() || qm.iter().zip(&cap).any(|(e, c)| e > c) {
                return None;
            }
            let qc = mulmod(rc, inv, p);
            for (m, c) in &d.terms[1..] {
                let t = mulmod(*c, qc, p);
                match rem.entry(mono_mul(m, &qm)) {
                    Entry::Occupied(mut e) => {
                        let v = (*e.get() + p - t) % p;
                        if v == 0 {
                            e.remove();
                        } else {
                            *e.get_mut() = v;
                        }
                    }
                    Entry::Vacant(e) => {
                        e.insert((p - t) % p);
                    }
                }
            }
            quot.push((qm, qc));
        }
        Some(PolyP { terms: quot })
    }
}

fn univariate_gcd(a: &PolyP, b: &PolyP, v: usize, p: u64) -> PolyP {
    let dense = |q: &PolyP| -> Vec<u64> {
        let mut out = vec![0u64; q.degree_in(v) as usize + 1];
        for (m, c) in &q.terms {
            out[m.get(v).copied().unwrap_or(0) as usize] = *c;
        }
        out
    };
    let trim = |x: &mut Vec<u64>| {
        while x.len() > 1 && *x.last().unwrap() == 0 {
            x.pop();
        }
    };
    let mut x = dense(a);
    let mut y = dense(b);
    trim(&mut x);
    trim(&mut y);
    while !(y.len() == 1 && y[0] == 0) {
        // x mod y
        let inv = invmod(*y.last().unwrap(), p);
        while x.len() >= y.len() && !(x.len() == 1 && x[0] == 0) {
            let f = mulmod(*x.last().unwrap(), inv, p);
            let shift = x.len() - y.len();
            for (k, yc) in y.iter().enumerate() {
                x[k + shift] = (x[k + shift] + p - mulmod(f, *yc, p)) % p;
            }
            x.pop();
            if x.is_empty() {
                x.push(0);
            }
            trim(&mut x);
        }
        std::mem::swap(&mut x, &mut y);
    }
    let g = PolyP::from_map(
        x.iter().enumerate().filter(|(_, c)| **c != 0).map(|(k, c)| (mono_var(v, k as u32), *c)).collect(),
    );
    g.monic(p)
}

fn content_in(coeffs: &[PolyP], vars: &[usize], p: u64) -> PolyP {
    let mut g = PolyP::zero();
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        g = if g.is_zero() { c.monic(p) } else { pgcd(&g, c, vars, p) };
        if g.is_constant() {
            break;
        }
    }
    g
}

/// Monic (lex) GCD over ℤ/p of nonzero polynomials in the listed variables.
fn pgcd(a: &PolyP, b: &PolyP, vars: &[usize], p: u64) -> PolyP {
    if a.is_constant() || b.is_constant() || vars.is_empty() {
        return PolyP::constant(1);
    }
    let v = *vars.last().unwrap();
    let rest = &vars[..vars.len() - 1];
    if rest.is_empty() {
        return univariate_gcd(a, b, v, p);
    }
    let ac = a.coeffs_in(v);
    let bc = b.coeffs_in(v);
    let ca = content_in(&ac, rest, p);
    let cb = content_in(&bc, rest, p);
    let c = pgcd(&ca, &cb, rest, p);
    let a1 = a.div_exact(&ca, p).expect("content divides");
    let b1 = b.div_exact(&cb, p).expect("content divides");
    if a1.degree_in(v) == 0 || b1.degree_in(v) == 0 {
        return c.monic(p);
    }
    let la = a1.coeffs_in(v).pop().unwrap();
    let lb = b1.coeffs_in(v).pop().unwrap();
    let gamma = pgcd(&la, &lb, rest, p);
    let u = *rest.last().unwrap();
    let mut inner: Vec<usize> = rest[..rest.len() - 1].to_vec();
    inner.push(v);
    let bound = gamma.degree_in(u) + a1.degree_in(u).min(b1.degree_in(u)) + 1;

    let mut h = PolyP::zero();
    let mut pts: Vec<u64> = Vec::new();
    let mut dmin = u32::MAX;
    let mut alpha = 0u64;
    loop {
        alpha += 1;
        assert!(alpha < p, "ran out of evaluation points");
        if la.eval_var(u, alpha, p).is_zero() || lb.eval_var(u, alpha, p).is_zero() {
            continue;
        }
        let aa = a1.eval_var(u, alpha, p);
        let ba = b1.eval_var(u, alpha, p);
        let mut g = pgcd(&aa, &ba, &inner, p);
        let d = g.degree_in(v);
        if d > dmin {
            continue;
        }
        if d < dmin {
            dmin = d;
            h = PolyP::zero();
            pts.clear();
        }
        if d == 0 {
            return c.monic(p);
        }
        // primitive part in v, then leading coefficient γ(α)
        let gc = content_in(&g.coeffs_in(v), &inner[..inner.len() - 1], p);
        g = g.div_exact(&gc, p).expect("content divides");
        let lg = g.coeffs_in(v).pop().unwrap();
        let ga = gamma.eval_var(u, alpha, p);
        let Some(g) = g.mul(&ga, p).div_exact(&lg, p) else { continue };
        // Newton step
        let h_at = h.eval_var(u, alpha, p);
        let mut q = PolyP::constant(1);
        let mut q_at = 1u64;
        for &b in &pts {
            q = q.mul(&PolyP::from_map([(mono_var(u, 1), 1u64), (Vec::new(), (p - b) % p)].into_iter().collect()), p);
            q_at = mulmod(q_at, (alpha + p - b) % p, p);
        }
        let corr = g.sub(&h_at, p).mul(&q, p).scale(invmod(q_at, p), p);
        let stable = corr.is_zero();
        h = h.add(&corr, p);
        pts.push(alpha);
        if stable || pts.len() as u32 >= bound {
            let hc = content_in(&h.coeffs_in(v), rest, p);
            let cand = h.div_exact(&hc, p).expect("content divides");
            if a1.div_exact(&cand, p).is_some() && b1.div_exact(&cand, p).is_some() {
                return cand.mul(&c, p).monic(p);
            }
        }
    }
}

fn variables(a: &Poly, b: &Poly) -> Vec<usize> {
    let n = a.nvars().max(b.nvars());
    (0..n).filter(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0).collect()
}

/// Cheap certificate that a primitive pair is coprime: for every variable,
/// the univariate image at a point keeping its leading coefficient nonzero
/// has a constant GCD.
pub(crate) fn certify_coprime(a: &Poly, b: &Poly) -> bool {
    let p = primes().next().unwrap();
    let vars = variables(a, b);
    let ap = PolyP::from_int(a, p);
    let bp = PolyP::from_int(b, p);
    for &v in &vars {
        if a.degree_in(v) == 0 || b.degree_in(v) == 0 {
            continue;
        }
        let la = ap.coeffs_in(v).pop().unwrap();
        let mut ok = false;
        for attempt in 0..3u64 {
            let mut ai = ap.clone();
            let mut bi = bp.clone();
            let mut lai = la.clone();
            for (k, &w) in vars.iter().enumerate() {
                if w != v {
                    let val = 1_000_003 + 7919 * (k as u64 + 1) + 104_729 * attempt;
                    ai = ai.eval_var(w, val, p);
                    bi = bi.eval_var(w, val, p);
                    lai = lai.eval_var(w, val, p);
                }
            }
            if lai.is_zero() || ai.is_zero() || bi.is_zero() {
                continue;
            }
            if univariate_gcd(&ai, &bi, v, p).degree_in(v) == 0 {
                ok = true;
                break;
            }
            // a nontrivial image on the first attempt is almost always a genuine factor
            break;
        }
        if !ok {
            return false;
        }
    }
    true
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// GCD of primitive polynomials with positive leading coefficients.
pub(crate) fn modular_gcd(a: &Poly, b: &Poly) -> Poly {
    let vars = variables(a, b);
    let lca = a.leading().unwrap().1.clone();
    let lcb = b.leading().unwrap().1.clone();
    let gamma = lca.gcd(&lcb);
    let mut modulus = BigInt::one();
    let mut acc: BTreeMap<Mono, BigInt> = BTreeMap::new();
    let mut lead: Option<Mono> = None;
    for p in primes() {
        let pb = BigInt::from(p);
        if (&lca % &pb).is_zero() || (&lcb % &pb).is_zero() {
            continue;
        }
        let ap = PolyP::from_int(a, p);
        let bp = PolyP::from_int(b, p);
        let g = pgcd(&ap, &bp, &vars, p);
        let lm = g.terms[0].0.clone();
        match &lead {
            Some(cur) if lm > *cur => continue,
            Some(cur) if lm < *cur => {
                acc.clear();
                modulus = BigInt::one();
            }
            _ => {}
        }
        lead = Some(lm);
        let g = g.scale(gamma.mod_floor(&pb).to_u64().unwrap(), p);
        // CRT: x ≡ acc (mod modulus), x ≡ g (mod p)
        let gm: BTreeMap<Mono, u64> = g.terms.iter().cloned().collect();
        let mut keys: Vec<Mono> = acc.keys().cloned().collect();
        keys.extend(gm.keys().cloned());
        keys.sort();
        keys.dedup();
        let inv = invmod((&modulus % &pb).to_u64().unwrap(), p);
        let new_mod = &modulus * &pb;
        let mut changed = false;
        let mut next: BTreeMap<Mono, BigInt> = BTreeMap::new();
        for k in keys {
            let old = acc.get(&k).cloned().unwrap_or_else(BigInt::zero);
            let r = gm.get(&k).copied().unwrap_or(0);
            let old_mod = old.mod_floor(&pb).to_u64().unwrap();
            let t = mulmod((r + p - old_mod) % p, inv, p);
            let val = symmetric(&(&old + &modulus * BigInt::from(t)), &new_mod);
            if val != old {
                changed = true;
            }
            if !val.is_zero() {
                next.insert(k, val);
            }
        }
        acc = next;
        modulus = new_mod;
        if !changed {
            let cand = Poly::from_terms(acc.iter().map(|(m, c)| (m.clone(), c.clone()))).primitive();
            if cand.is_one() || (a.div_exact(&cand).is_some() && b.div_exact(&cand).is_some()) {
                return cand;
            }
        }
    }
    unreachable!("prime iterator is infinite")
}
