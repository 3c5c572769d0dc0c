//! Concrete finite fields `F_{p^n} = F_p[x]/(f)` with `f` the lexicographically smallest monic
//! irreducible of degree `n`.
//!
//! Coefficients are `u64` residues. Products are accumulated without reduction, which is exact
//! for `p < 2^20` and degrees up to `2^20`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;

use crate::classifier::minpoly::{Atom, Coefficient, SymbolicMinPoly};
use crate::error::{Error, Result};

/// Largest characteristic for concrete arithmetic.
pub const MAX_CONCRETE_PRIME: u64 = 1 << 20;

/// Largest extension degree `n` built by [`ExtensionField::construct`].
pub const MAX_CONCRETE_DEGREE: usize = 4096;

fn pow_prime(base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut b = base % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_prime(a, p - 2, p)
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Remainder of `a` modulo `b` (`b` non-zero, trimmed).
fn poly_rem(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    trim(&mut a);
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while a.len() > db {
        let top = a.len() - 1;
        let c = a[top] * lead_inv % p;
        if c != 0 {
            let shift = top - db;
            for (j, &bj) in b.iter().enumerate() {
                a[shift + j] = (a[shift + j] + (p - c) * bj) % p;
            }
        }
        trim(&mut a);
    }
    a
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let li = inv_mod(lead, p);
        for c in a.iter_mut() {
            *c = *c * li % p;
        }
    }
    a
}

/// Arithmetic in `F_p[x]/(f)` for a monic `f`, irreducible or not.
#[derive(Clone, Debug)]
struct QuotientRing {
    p: u64,
    n: usize,
    modulus: Vec<u64>,
    /// Non-zero coefficients of `x^n mod f`, as `(degree, value)`.
    tail: Vec<(usize, u64)>,
}

impl QuotientRing {
    fn new(p: u64, modulus: Vec<u64>) -> Self {
        let n = modulus.len() - 1;
        let tail = modulus[..n].iter().enumerate().filter(|&(_, &c)| c != 0).map(|(i, &c)| (i, p - c)).collect();
        QuotientRing { p, n, modulus, tail }
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = self.n;
        if n == 0 {
            return Vec::new();
        }
        let mut acc = vec![0u64; 2 * n - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (slot, &bj) in acc[i..i + n].iter_mut().zip(b) {
                *slot += ai * bj;
            }
        }
        self.reduce(acc)
    }

    fn square(&self, a: &[u64]) -> Vec<u64> {
        let n = self.n;
        if n == 0 {
            return Vec::new();
        }
        let mut acc = vec![0u64; 2 * n - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            acc[2 * i] += ai * ai;
            let twice = 2 * ai;
            for (slot, &aj) in acc[2 * i + 1..i + n].iter_mut().zip(&a[i + 1..]) {
                *slot += twice * aj;
            }
        }
        self.reduce(acc)
    }

    /// Folds a product of length `2n - 1` back below degree `n`.
    fn reduce(&self, mut acc: Vec<u64>) -> Vec<u64> {
        let (p, n) = (self.p, self.n);
        for top in (n..acc.len()).rev() {
            let c = acc[top] % p;
            if c == 0 {
                continue;
            }
            let shift = top - n;
            for &(j, f) in &self.tail {
                acc[shift + j] += c * f;
            }
        }
        acc.truncate(n);
        for c in acc.iter_mut() {
            *c %= p;
        }
        acc
    }

    fn one(&self) -> Vec<u64> {
        let mut v = vec![0u64; self.n];
        if self.n > 0 {
            v[0] = 1;
        }
        v
    }

    /// `x^k mod f` for `k < n`, or by repeated squaring otherwise.
    fn monomial(&self, k: u64) -> Vec<u64> {
        if k < self.n as u64 {
            let mut v = vec![0u64; self.n];
            v[k as usize] = 1;
            return v;
        }
        let mut x = vec![0u64; self.n];
        if self.n == 1 {
            x[0] = (self.p - self.modulus[0]) % self.p;
        } else {
            x[1] = 1;
        }
        self.pow_u64(&x, k)
    }

    fn pow_u64(&self, a: &[u64], mut exp: u64) -> Vec<u64> {
        let mut acc = self.one();
        let mut base = a.to_vec();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.square(&base);
            }
        }
        acc
    }

    fn pow_big(&self, a: &[u64], exp: &BigUint) -> Vec<u64> {
        let mut acc = self.one();
        for i in (0..exp.bits()).rev() {
            acc = self.square(&acc);
            if exp.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }
}

/// Ben-Or's test: `f` of degree `n` is irreducible iff `gcd(x^{p^i} - x, f) = 1` for
/// `1 <= i <= n/2`. Cheap necessary conditions run first.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let roots_checked = p <= 1024;
    if roots_checked && (1..p).any(|t| eval_prime(f, t, p) == 0) {
        return false;
    }
    // Stickelberger: a squarefree f with r irreducible factors has r = n (mod 2) exactly
    // when its discriminant is a square.
    match discriminant(f, p) {
        0 => return false,
        d if n.is_multiple_of(2) == is_square_mod(d, p) => return false,
        _ => {}
    }
    let ring = QuotientRing::new(p, f.to_vec());
    let mut h = ring.monomial(p);
    for i in 1..=n / 2 {
        if i > 1 {
            h = ring.pow_u64(&h, p);
        }
        if i == 1 && roots_checked {
            continue;
        }
        let mut diff = h.clone();
        diff[1] = (diff[1] + p - 1) % p;
        if poly_gcd(diff, f.to_vec(), p).len() > 1 {
            return false;
        }
    }
    true
}

fn is_square_mod(a: u64, p: u64) -> bool {
    pow_prime(a, (p - 1) / 2, p) == 1
}

/// Resultant of `a` and `b` over `F_p` by the Euclidean algorithm.
fn resultant(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> u64 {
    trim(&mut a);
    trim(&mut b);
    let mut acc = 1u64;
    loop {
        if a.is_empty() || b.is_empty() {
            return 0;
        }
        let (da, db) = (a.len() - 1, b.len() - 1);
        if db == 0 {
            return acc * pow_prime(b[0], da as u64, p) % p;
        }
        let r = poly_rem(a.clone(), &b, p);
        if r.is_empty() {
            return 0;
        }
        let dr = r.len() - 1;
        // res(a, b) = (-1)^(da·db) · lc(b)^(da - dr) · res(b, r)
        if da * db % 2 == 1 {
            acc = (p - acc) % p;
        }
        acc = acc * pow_prime(b[db], (da - dr) as u64, p) % p;
        a = b;
        b = r;
    }
}

/// Discriminant of a monic `f`: `(-1)^(n(n-1)/2) res(f, f')`.
fn discriminant(f: &[u64], p: u64) -> u64 {
    let n = f.len() - 1;
    let deriv: Vec<u64> = f.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % p) * c % p).collect();
    let r = resultant(f.to_vec(), deriv, p);
    if (n * (n - 1) / 2) % 2 == 1 {
        (p - r) % p
    } else {
        r
    }
}

fn eval_prime(f: &[u64], t: u64, p: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &c| (acc * t + c) % p)
}

/// Lexicographically smallest monic irreducible of degree `n`, comparing coefficients from
/// `x^(n-1)` down to `x^0`.
pub fn smallest_irreducible(p: u64, n: usize) -> Vec<u64> {
    let mut low = vec![0u64; n];
    loop {
        let mut f = low.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
        // Increment with the constant term least significant.
        let mut i = 0;
        loop {
            low[i] += 1;
            if low[i] < p {
                break;
            }
            low[i] = 0;
            i += 1;
            assert!(i < n, "an irreducible polynomial of every degree exists");
        }
    }
}

/// An element of some [`ExtensionField`]: coefficients of `1, x, …, x^(n-1)`.
pub type FqElement = Vec<u64>;

#[derive(Debug)]
pub struct ExtensionField {
    ring: QuotientRing,
}

type Cache = Mutex<HashMap<(u64, usize), Arc<ExtensionField>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl ExtensionField {
    /// `F_{p^n}`, memoised per `(p, n)`.
    pub fn construct(p: u64, n: usize) -> Result<Arc<ExtensionField>> {
        if !crate::base_field::is_prime(p) || p == 2 || p >= MAX_CONCRETE_PRIME {
            return Err(Error::InvalidArgument(format!(
                "concrete fields need an odd prime below {MAX_CONCRETE_PRIME}, got {p}"
            )));
        }
        if n == 0 || n > MAX_CONCRETE_DEGREE {
            return Err(Error::SizeGuard(format!("extension degree must lie in 1..={MAX_CONCRETE_DEGREE}, got {n}")));
        }
        if let Some(f) = cache().lock().expect("cache lock").get(&(p, n)) {
            return Ok(Arc::clone(f));
        }
        let field = Arc::new(ExtensionField { ring: QuotientRing::new(p, smallest_irreducible(p, n)) });
        cache().lock().expect("cache lock").insert((p, n), Arc::clone(&field));
        Ok(field)
    }

    pub fn characteristic(&self) -> u64 {
        self.ring.p
    }

    pub fn degree(&self) -> usize {
        self.ring.n
    }

    /// The defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u64] {
        &self.ring.modulus
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(self.ring.p).pow(self.ring.n as u32)
    }

    pub fn zero(&self) -> FqElement {
        vec![0; self.ring.n]
    }

    pub fn one(&self) -> FqElement {
        self.ring.one()
    }

    pub fn from_int(&self, c: i64) -> FqElement {
        let mut v = self.zero();
        v[0] = c.rem_euclid(self.ring.p as i64) as u64;
        v
    }

    /// The `t`-th element in base-`p` order: digit `i` of `t` is the coefficient of `x^i`.
    pub fn element_from_index(&self, mut t: u128) -> FqElement {
        let p = self.ring.p as u128;
        let mut v = self.zero();
        for c in v.iter_mut() {
            *c = (t % p) as u64;
            t /= p;
        }
        v
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> FqElement {
        let p = self.ring.p;
        a.iter().zip(b).map(|(&x, &y)| (x + y) % p).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> FqElement {
        let p = self.ring.p;
        a.iter().zip(b).map(|(&x, &y)| (x + p - y) % p).collect()
    }

    pub fn scale(&self, a: &[u64], c: i64) -> FqElement {
        let p = self.ring.p;
        let c = c.rem_euclid(p as i64) as u64;
        a.iter().map(|&x| x * c % p).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> FqElement {
        self.ring.mul(a, b)
    }

    pub fn pow(&self, a: &[u64], exp: u64) -> FqElement {
        self.ring.pow_u64(a, exp)
    }

    pub fn pow_big(&self, a: &[u64], exp: &BigUint) -> FqElement {
        self.ring.pow_big(a, exp)
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    /// The value in `F_p` if `a` is a constant.
    pub fn as_prime(&self, a: &[u64]) -> Option<u64> {
        a[1..].iter().all(|&c| c == 0).then_some(a[0])
    }

    /// Primitive `2^e`-th root of unity `g^((p^n - 1)/2^e)` for the first `g` in base-`p`
    /// order that yields one.
    pub fn root_of_unity(&self, e: u32) -> Result<FqElement> {
        let order = self.order() - 1u32;
        let two_e = BigUint::from(1u32) << e;
        if &order % &two_e != BigUint::from(0u32) {
            return Err(Error::NoRootOfUnity { p: self.ring.p, n: self.ring.n, e });
        }
        if e == 0 {
            return Ok(self.one());
        }
        let cofactor = order >> e;
        let half = BigUint::from(1u32) << (e - 1);
        let one = self.one();
        let mut t: u128 = 2;
        loop {
            let g = self.element_from_index(t);
            t += 1;
            if self.is_zero(&g) {
                continue;
            }
            let z = self.pow_big(&g, &cofactor);
            if self.pow_big(&z, &half) != one {
                return Ok(z);
            }
        }
    }

    /// Conjugates `a, a^q, a^{q^2}, …` over `F_q`.
    pub fn orbit(&self, a: &[u64], q: u64) -> Vec<FqElement> {
        let mut out = vec![a.to_vec()];
        loop {
            let next = self.pow(out.last().expect("non-empty"), q);
            if next == a {
                return out;
            }
            out.push(next);
        }
    }

    pub fn orbit_size(&self, a: &[u64], q: u64) -> usize {
        let mut count = 1;
        let mut cur = self.pow(a, q);
        while cur != a {
            cur = self.pow(&cur, q);
            count += 1;
        }
        count
    }

    pub fn contains_in_base(&self, a: &[u64], q: u64) -> bool {
        self.pow(a, q) == a
    }

    /// Minimal polynomial of `a` over `F_q` as the product over its Frobenius orbit, lowest
    /// coefficient first.
    pub fn min_poly_over(&self, a: &[u64], q: u64) -> Vec<FqElement> {
        let mut poly = vec![self.one()];
        for c in self.orbit(a, q) {
            let mut next = vec![self.zero(); poly.len() + 1];
            for (i, coeff) in poly.iter().enumerate() {
                next[i + 1] = self.add(&next[i + 1], coeff);
                let prod = self.mul(coeff, &c);
                next[i] = self.sub(&next[i], &prod);
            }
            poly = next;
        }
        poly
    }
}

/// A primitive `2^e`-th root of unity inside a concrete finite field, with the `ζ`/`τ`
/// constants it determines.
#[derive(Debug)]
pub struct ConcreteCyclotomic {
    pub field: Arc<ExtensionField>,
    pub q: u64,
    pub e: u32,
    pub zeta: FqElement,
}

/// Multiplicative order of `q` modulo `2^e`.
pub fn order_mod_pow2(q: u64, e: u32) -> u64 {
    crate::unit_group::order_mod(e, q & crate::unit_group::mask(e))
}

impl ConcreteCyclotomic {
    /// Builds `ζ_{2^e}` in `F_{q^d}`, `q = p^k`, with `d` the order of `q` modulo `2^e`.
    pub fn new(p: u64, k: u32, e: u32) -> Result<Self> {
        let q = p.checked_pow(k).ok_or_else(|| Error::SizeGuard(format!("{p}^{k} does not fit in 64 bits")))?;
        let d = order_mod_pow2(q, e);
        let n = (k as u64)
            .checked_mul(d)
            .filter(|&n| n <= MAX_CONCRETE_DEGREE as u64)
            .ok_or_else(|| Error::SizeGuard(format!("F_{p}^{k}(ζ_2^{e}) has degree {k}·{d} over F_{p}")))?;
        let field = ExtensionField::construct(p, n as usize)?;
        let zeta = field.root_of_unity(e)?;
        Ok(ConcreteCyclotomic { field, q, e, zeta })
    }

    /// `ζ_{2^k} = ζ_{2^e}^{2^(e-k)}` for `k <= e`.
    pub fn zeta_level(&self, k: u32) -> FqElement {
        assert!(k <= self.e, "level {k} above the constructed root 2^{}", self.e);
        self.field.pow(&self.zeta, 1u64 << (self.e - k))
    }

    pub fn tau(&self, k: u32, minus: bool) -> FqElement {
        let z = self.zeta_level(k);
        let inv = self.field.pow(&z, (1u64 << k) - 1);
        if minus {
            self.field.sub(&z, &inv)
        } else {
            self.field.add(&z, &inv)
        }
    }

    pub fn atom(&self, a: Atom) -> FqElement {
        match a {
            Atom::One => self.field.one(),
            Atom::Zeta(k) => self.zeta_level(k),
            Atom::TauPlus(k) => self.tau(k, false),
            Atom::TauMinus(k) => self.tau(k, true),
        }
    }

    pub fn coefficient(&self, c: &Coefficient) -> FqElement {
        c.entries().fold(self.field.zero(), |acc, (a, s)| {
            let term = self.field.scale(&self.atom(a), s);
            self.field.add(&acc, &term)
        })
    }

    /// Evaluates `poly` at `x`.
    pub fn evaluate(&self, poly: &SymbolicMinPoly, x: &[u64]) -> FqElement {
        poly.terms().fold(self.field.zero(), |acc, (n, c)| {
            let term = self.field.mul(&self.coefficient(c), &self.field.pow(x, n));
            self.field.add(&acc, &term)
        })
    }

    pub fn in_base(&self, a: &[u64]) -> bool {
        self.field.contains_in_base(a, self.q)
    }

    /// Dense coefficients in `F_p`, lowest first, when every coefficient is a prime-field
    /// constant.
    pub fn resolve_prime(&self, poly: &SymbolicMinPoly) -> Option<Vec<u64>> {
        let mut out = vec![0u64; poly.degree() as usize + 1];
        for (n, c) in poly.terms() {
            out[n as usize] = self.field.as_prime(&self.coefficient(c))?;
        }
        Some(out)
    }
}

/// `x^4 + 2x^2 + 2` style rendering with symmetric representatives when `sym` is set.
pub fn render_prime_poly(coeffs: &[u64], p: u64, sym: bool) -> String {
    let mut out = String::new();
    for (n, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let v: i64 = if sym && c > p / 2 { c as i64 - p as i64 } else { c as i64 };
        let neg = v < 0;
        let mag = v.unsigned_abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match n {
            0 => String::new(),
            1 => "x".into(),
            n => format!("x^{n}"),
        };
        match (mag, mono.is_empty()) {
            (m, true) => out.push_str(&m.to_string()),
            (1, false) => out.push_str(&mono),
            (m, false) => out.push_str(&format!("{m}{mono}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mobius(n: usize) -> i64 {
        let mut m = n;
        let mut out = 1;
        let mut d = 2;
        while d * d <= m {
            if m.is_multiple_of(d) {
                m /= d;
                if m.is_multiple_of(d) {
                    return 0;
                }
                out = -out;
            }
            d += 1;
        }
        if m > 1 {
            out = -out;
        }
        out
    }

    fn irreducible_count(p: u64, n: usize) -> u64 {
        let mut total: i64 = 0;
        for d in 1..=n {
            if n.is_multiple_of(d) {
                total += mobius(n / d) * (p as i64).pow(d as u32);
            }
        }
        (total / n as i64) as u64
    }

    fn all_monic(p: u64, n: usize) -> impl Iterator<Item = Vec<u64>> {
        (0..p.pow(n as u32)).map(move |mut t| {
            let mut f: Vec<u64> = (0..n)
                .map(|_| {
                    let c = t % p;
                    t /= p;
                    c
                })
                .collect();
            f.push(1);
            f
        })
    }

    #[test]
    fn irreducible_counts_match_gauss() {
        for (p, n) in [(3, 1), (3, 2), (3, 3), (3, 4), (3, 5), (5, 2), (5, 3), (5, 4), (7, 3), (11, 2)] {
            let count = all_monic(p, n).filter(|f| is_irreducible(f, p)).count() as u64;
            assert_eq!(count, irreducible_count(p, n), "p={p} n={n}");
        }
    }

    /// Ben-Or with none of the shortcuts.
    fn ben_or_plain(f: &[u64], p: u64) -> bool {
        let n = f.len() - 1;
        let ring = QuotientRing::new(p, f.to_vec());
        let mut h = ring.monomial(1);
        (1..=n / 2).all(|_| {
            h = ring.pow_u64(&h, p);
            let mut diff = h.clone();
            diff[1] = (diff[1] + p - 1) % p;
            poly_gcd(diff, f.to_vec(), p).len() == 1
        })
    }

    #[test]
    fn shortcuts_agree_with_plain_ben_or() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for p in [3u64, 13, 1031, 4099] {
            for n in 2..=8usize {
                for _ in 0..60 {
                    let mut f: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
                    f[0] = f[0].max(1);
                    f.push(1);
                    assert_eq!(is_irreducible(&f, p), ben_or_plain(&f, p), "p={p} f={f:?}");
                }
            }
        }
    }

    #[test]
    fn smallest_is_first_in_order() {
        for (p, n) in [(3, 2), (3, 4), (5, 4), (7, 2)] {
            let first = all_monic(p, n)
                .min_by_key(|f| {
                    if is_irreducible(f, p) {
                        (0, f[..n].iter().rev().copied().collect::<Vec<_>>())
                    } else {
                        (1, Vec::new())
                    }
                })
                .unwrap();
            assert_eq!(smallest_irreducible(p, n), first);
        }
        assert_eq!(smallest_irreducible(3, 2), [1, 0, 1]);
    }

    #[test]
    fn root_orders() {
        let f = ExtensionField::construct(3, 4).unwrap();
        let z = f.root_of_unity(4).unwrap();
        assert_eq!(f.pow(&z, 16), f.one());
        assert_ne!(f.pow(&z, 8), f.one());
        assert!(f.root_of_unity(5).is_err());
        assert_eq!(f.orbit_size(&z, 3), 4);
    }

    #[test]
    fn min_poly_of_zeta16_over_f3() {
        let c = ConcreteCyclotomic::new(3, 1, 4).unwrap();
        let mp = c.field.min_poly_over(&c.zeta, 3);
        let coeffs: Vec<u64> = mp.iter().map(|x| c.field.as_prime(x).unwrap()).collect();
        let text = render_prime_poly(&coeffs, 3, true);
        assert!(text == "x^4 - x^2 - 1" || text == "x^4 + x^2 - 1", "{text}");
    }

    #[test]
    fn field_axioms_spot_check() {
        let f = ExtensionField::construct(5, 6).unwrap();
        let a = f.element_from_index(1234);
        let b = f.element_from_index(9876);
        let c = f.element_from_index(555);
        assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
        let order = f.order() - 1u32;
        assert_eq!(f.pow_big(&a, &order), f.one());
    }
}
