//! Exact arithmetic in cyclotomic fields Q(zeta_n).
//!
//! An element is stored as a dense vector of rational coefficients of
//! 1, zeta, zeta^2, .., zeta^(n-1) where zeta = e^(2*pi*i/n), i.e. as a
//! representative in Q[x]/(x^n - 1).  Addition and multiplication reduce
//! exponents mod n only, which keeps products cheap; equality and
//! zero-testing reduce modulo the n-th cyclotomic polynomial Phi_n, the
//! actual minimal polynomial of zeta.  Division reduces mod Phi_n and
//! inverts with the extended Euclidean algorithm in Q[x].
//!
//! Elements of different conductors are compared and combined by
//! embedding both into Q(zeta_lcm) via zeta_n = zeta_lcm^(lcm/n).

use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// Exact rational scalar used throughout the crate.
pub type Rat = BigRational;

pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

fn lcm_u64(a: u64, b: u64) -> u64 {
    num::integer::lcm(a, b)
}

/// An element of Q(zeta_n), n >= 1.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    n: u64,
    c: Vec<Rat>, // length n, coefficient of zeta^i at index i
}

impl Cyclotomic {
    pub fn zero(n: u64) -> Self {
        assert!(n >= 1);
        Cyclotomic {
            n,
            c: vec![Rat::zero(); n as usize],
        }
    }

    pub fn one(n: u64) -> Self {
        let mut z = Self::zero(n);
        z.c[0] = Rat::one();
        z
    }

    pub fn from_rational(q: Rat) -> Self {
        Cyclotomic { n: 1, c: vec![q] }
    }

    pub fn from_int(k: i64) -> Self {
        Self::from_rational(rat_int(k))
    }

    /// zeta_n^e, exponent taken mod n.
    pub fn root_of_unity(n: u64, e: i64) -> Self {
        assert!(n >= 1);
        let mut z = Self::zero(n);
        let e = e.rem_euclid(n as i64) as usize;
        z.c[e] = Rat::one();
        z
    }

    /// Build from explicit coefficients of 1, zeta, .., zeta^(n-1).
    pub fn from_coeffs(n: u64, c: Vec<Rat>) -> Self {
        assert_eq!(c.len(), n as usize);
        Cyclotomic { n, c }
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    /// Embed into Q(zeta_m); requires n | m.
    pub fn promote(&self, m: u64) -> Self {
        assert!(m % self.n == 0, "promote requires conductor divisibility");
        if m == self.n {
            return self.clone();
        }
        let k = (m / self.n) as usize;
        let mut c = vec![Rat::zero(); m as usize];
        for (i, a) in self.c.iter().enumerate() {
            if !a.is_zero() {
                c[i * k] = a.clone();
            }
        }
        Cyclotomic { n: m, c }
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let m = lcm_u64(a.n, b.n);
        (a.promote(m), b.promote(m))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = Self::common(self, other);
        for i in 0..a.c.len() {
            a.c[i] += &b.c[i];
        }
        a
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (mut a, b) = Self::common(self, other);
        for i in 0..a.c.len() {
            a.c[i] -= &b.c[i];
        }
        a
    }

    pub fn neg(&self) -> Self {
        let mut a = self.clone();
        for x in &mut a.c {
            *x = -std::mem::take(x);
        }
        a
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = Self::common(self, other);
        let n = a.n as usize;
        let mut c = vec![Rat::zero(); n];
        for (i, ai) in a.c.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.c.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let k = (i + j) % n;
                c[k] += ai * bj;
            }
        }
        Cyclotomic { n: a.n, c }
    }

    pub fn scale(&self, q: &Rat) -> Self {
        let mut a = self.clone();
        for x in &mut a.c {
            *x *= q;
        }
        a
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Cheap check on the stored representative only; false negatives are
    /// possible (a zero value with nonzero representative), never false
    /// positives.  Useful to skip arithmetic, never for semantics.
    pub fn is_structurally_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// True zero test: reduces the representative mod Phi_n.
    pub fn is_zero(&self) -> bool {
        if self.is_structurally_zero() {
            return true;
        }
        let phi = cyclotomic_polynomial(self.n);
        let rem = poly_rem(&self.c, &phi);
        rem.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.sub(&Self::one(1)).is_zero()
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<Self> {
        let phi = cyclotomic_polynomial(self.n);
        let f = poly_rem(&self.c, &phi);
        if f.iter().all(|x| x.is_zero()) {
            return Err(Error::validation("division by zero in Q(zeta)"));
        }
        // Extended Euclid: s*f + t*phi = gcd = constant (Phi_n irreducible over Q).
        let (g, s) = poly_ext_gcd(&f, &phi);
        debug_assert!(poly_deg(&g) == Some(0));
        let ginv = g[0].recip();
        let mut c = vec![Rat::zero(); self.n as usize];
        for (i, a) in s.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            // deg s < deg Phi_n <= n; entries beyond are zero padding
            c[i] = a * &ginv;
        }
        Ok(Cyclotomic { n: self.n, c })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        let (a, b) = Self::common(self, other);
        Ok(a.mul(&b.inv()?))
    }

    /// The rational value of this element if it lies in Q, else None.
    pub fn as_rational(&self) -> Option<Rat> {
        let phi = cyclotomic_polynomial(self.n);
        let rem = poly_rem(&self.c, &phi);
        match poly_deg(&rem) {
            None => Some(Rat::zero()),
            Some(0) => Some(rem[0].clone()),
            Some(_) => None,
        }
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}
impl Eq for Cyclotomic {}

/// Coefficients of the n-th cyclotomic polynomial Phi_n, ascending degree.
///
/// Computed as (x^n - 1) / prod_{d | n, d < n} Phi_d by exact division.
/// Memoized per thread: zero tests hit the same small conductors repeatedly.
pub fn cyclotomic_polynomial(n: u64) -> Vec<Rat> {
    thread_local! {
        static CACHE: std::cell::RefCell<std::collections::BTreeMap<u64, Vec<Rat>>> =
            std::cell::RefCell::new(std::collections::BTreeMap::new());
    }
    CACHE.with(|cache| {
        if let Some(p) = cache.borrow().get(&n) {
            return p.clone();
        }
        let p = cyclotomic_polynomial_uncached(n);
        cache.borrow_mut().insert(n, p.clone());
        p
    })
}

fn cyclotomic_polynomial_uncached(n: u64) -> Vec<Rat> {
    let mut table: Vec<(u64, Vec<Rat>)> = Vec::new();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        // x^d - 1
        let mut p = vec![Rat::zero(); d as usize + 1];
        p[0] = -Rat::one();
        p[d as usize] = Rat::one();
        for (e, q) in table.iter() {
            if d % e == 0 {
                p = poly_div_exact(&p, q);
            }
        }
        table.push((d, p));
    }
    table.pop().unwrap().1
}

fn poly_deg(p: &[Rat]) -> Option<usize> {
    p.iter().rposition(|x| !x.is_zero())
}

fn poly_rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let db = poly_deg(b).expect("division by zero polynomial");
    let mut r: Vec<Rat> = a.to_vec();
    let lead = b[db].clone();
    loop {
        let dr = match poly_deg(&r) {
            Some(d) if d >= db => d,
            _ => break,
        };
        let q = &r[dr] / &lead;
        for i in 0..=db {
            let t = &b[i] * &q;
            r[dr - db + i] -= t;
        }
        r[dr] = Rat::zero(); // guard against residual round-off; exact here
    }
    r
}

/// Divide a by b when the division is exact; panics otherwise.
fn poly_div_exact(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let db = poly_deg(b).expect("division by zero polynomial");
    let da = match poly_deg(a) {
        Some(d) => d,
        None => return vec![Rat::zero()],
    };
    assert!(da >= db);
    let mut r = a.to_vec();
    let mut q = vec![Rat::zero(); da - db + 1];
    let lead = b[db].clone();
    for k in (0..=da - db).rev() {
        let coeff = &r[k + db] / &lead;
        if !coeff.is_zero() {
            for i in 0..=db {
                let t = &b[i] * &coeff;
                r[k + i] -= t;
            }
        }
        q[k] = coeff;
    }
    assert!(r.iter().all(|x| x.is_zero()), "inexact polynomial division");
    q
}

/// Returns (g, s) with s*f ≡ g (mod m) and g = gcd(f, m), via extended Euclid.
fn poly_ext_gcd(f: &[Rat], m: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut r0: Vec<Rat> = m.to_vec();
    let mut r1: Vec<Rat> = f.to_vec();
    let mut s0: Vec<Rat> = vec![Rat::zero()];
    let mut s1: Vec<Rat> = vec![Rat::one()];
    while poly_deg(&r1).is_some() {
        let (q, r) = poly_divmod(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    (r0, s0)
}

fn poly_divmod(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let db = poly_deg(b).expect("division by zero polynomial");
    let da = match poly_deg(a) {
        Some(d) => d,
        None => return (vec![Rat::zero()], vec![Rat::zero()]),
    };
    if da < db {
        return (vec![Rat::zero()], a.to_vec());
    }
    let mut r = a.to_vec();
    let mut q = vec![Rat::zero(); da - db + 1];
    let lead = b[db].clone();
    for k in (0..=da - db).rev() {
        let coeff = &r[k + db] / &lead;
        if !coeff.is_zero() {
            for i in 0..=db {
                let t = &b[i] * &coeff;
                r[k + i] -= t;
            }
        }
        q[k] = coeff;
    }
    (q, r)
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut c = vec![Rat::zero(); a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            c[i + j] += x * y;
        }
    }
    c
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut c = vec![Rat::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        c[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        c[i] -= y;
    }
    c
}

// ---------------------------------------------------------------------------
// Literal syntax: sums of terms `r`, `r z(n)`, `r z(n)^e` with rational r.

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            if wrote {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            } else if neg {
                write!(f, "-")?;
            }
            let unit_coeff = mag.is_one() && i != 0;
            if !unit_coeff {
                write!(f, "{}", mag)?;
            }
            if i != 0 {
                if !unit_coeff {
                    write!(f, " ")?;
                }
                write!(f, "z({})", self.n)?;
                if i != 1 {
                    write!(f, "^{}", i)?;
                }
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Parse the literal syntax accepted in configuration files.
///
/// Grammar (whitespace-insensitive):
///   expr := ['-'] term (('+'|'-') term)*
///   term := rat | rat ['*'] zeta | zeta
///   zeta := 'z(' uint ')' ['^' int]
///   rat  := uint ['/' uint]
pub fn parse_cyclotomic(s: &str) -> Result<Cyclotomic> {
    let t: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0usize;
    let out = parse_expr(&t, &mut pos)?;
    if pos != t.len() {
        return Err(Error::usage(format!(
            "trailing characters in cyclotomic literal {:?}",
            s
        )));
    }
    Ok(out)
}

fn parse_expr(t: &[char], pos: &mut usize) -> Result<Cyclotomic> {
    let mut acc = Cyclotomic::zero(1);
    let mut sign = 1i64;
    if peek(t, *pos) == Some('-') {
        *pos += 1;
        sign = -1;
    } else if peek(t, *pos) == Some('+') {
        *pos += 1;
    }
    loop {
        let term = parse_term(t, pos)?;
        acc = if sign > 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
        match peek(t, *pos) {
            Some('+') => {
                *pos += 1;
                sign = 1;
            }
            Some('-') => {
                *pos += 1;
                sign = -1;
            }
            _ => break,
        }
    }
    Ok(acc)
}

fn parse_term(t: &[char], pos: &mut usize) -> Result<Cyclotomic> {
    let coeff = if peek(t, *pos).map_or(false, |c| c.is_ascii_digit()) {
        let num = parse_uint(t, pos)?;
        let den = if peek(t, *pos) == Some('/') {
            *pos += 1;
            let d = parse_uint(t, pos)?;
            if d == 0 {
                return Err(Error::usage("zero denominator in cyclotomic literal"));
            }
            d
        } else {
            1
        };
        Some(Rat::new(BigInt::from(num), BigInt::from(den)))
    } else {
        None
    };
    if peek(t, *pos) == Some('*') {
        *pos += 1;
    }
    if peek(t, *pos) == Some('z') {
        *pos += 1;
        expect(t, pos, '(')?;
        let n = parse_uint(t, pos)?;
        if n == 0 {
            return Err(Error::usage("z(0) is not a root of unity"));
        }
        expect(t, pos, ')')?;
        let e = if peek(t, *pos) == Some('^') {
            *pos += 1;
            let neg = if peek(t, *pos) == Some('-') {
                *pos += 1;
                true
            } else {
                false
            };
            let v = parse_uint(t, pos)? as i64;
            if neg {
                -v
            } else {
                v
            }
        } else {
            1
        };
        let root = Cyclotomic::root_of_unity(n, e);
        Ok(match coeff {
            Some(q) => root.scale(&q),
            None => root,
        })
    } else {
        match coeff {
            Some(q) => Ok(Cyclotomic::from_rational(q)),
            None => Err(Error::usage("expected rational or z(..) in cyclotomic literal")),
        }
    }
}

fn peek(t: &[char], pos: usize) -> Option<char> {
    t.get(pos).copied()
}

fn expect(t: &[char], pos: &mut usize, c: char) -> Result<()> {
    if peek(t, *pos) == Some(c) {
        *pos += 1;
        Ok(())
    } else {
        Err(Error::usage(format!(
            "expected {:?} in cyclotomic literal",
            c
        )))
    }
}

fn parse_uint(t: &[char], pos: &mut usize) -> Result<u64> {
    let start = *pos;
    while peek(t, *pos).map_or(false, |c| c.is_ascii_digit()) {
        *pos += 1;
    }
    if *pos == start {
        return Err(Error::usage("expected integer in cyclotomic literal"));
    }
    t[start..*pos]
        .iter()
        .collect::<String>()
        .parse::<u64>()
        .map_err(|e| Error::usage(format!("integer overflow in literal: {}", e)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_root_relations() {
        // zeta_6^3 = -1
        let z6 = Cyclotomic::root_of_unity(6, 1);
        assert_eq!(z6.pow(3), Cyclotomic::from_int(-1));
        // zeta_8^2 = zeta_4
        let z8 = Cyclotomic::root_of_unity(8, 1);
        assert_eq!(z8.pow(2), Cyclotomic::root_of_unity(4, 1));
        // 1 + zeta_5 + .. + zeta_5^4 = 0
        let mut s = Cyclotomic::zero(5);
        for e in 0..5 {
            s = s.add(&Cyclotomic::root_of_unity(5, e));
        }
        assert!(s.is_zero());
    }

    #[test]
    fn zero_test_needs_phi_reduction() {
        // 1 + zeta_3 + zeta_3^2 is zero although its coefficient vector is not.
        let mut s = Cyclotomic::zero(3);
        for e in 0..3 {
            s = s.add(&Cyclotomic::root_of_unity(3, e));
        }
        assert!(s.coeffs().iter().any(|c| !c.is_zero()));
        assert!(s.is_zero());
    }

    #[test]
    fn division() {
        let a = Cyclotomic::root_of_unity(7, 3).scale(&rat(2, 5));
        let b = Cyclotomic::root_of_unity(7, 5).add(&Cyclotomic::from_int(2));
        let q = a.div(&b).unwrap();
        assert_eq!(q.mul(&b), a);
        // (zeta_3 - 1) is invertible even though x-1 divides x^3 - 1
        let c = Cyclotomic::root_of_unity(3, 1).sub(&Cyclotomic::one(1));
        let inv = c.inv().unwrap();
        assert!(c.mul(&inv).is_one());
    }

    #[test]
    fn mixed_conductor_equality() {
        assert_eq!(
            Cyclotomic::root_of_unity(8, 4),
            Cyclotomic::from_int(-1)
        );
        assert_eq!(
            Cyclotomic::root_of_unity(12, 4),
            Cyclotomic::root_of_unity(3, 1)
        );
    }

    #[test]
    fn phi_polynomials() {
        let to_i64 = |p: Vec<Rat>| -> Vec<i64> {
            p.iter()
                .map(|c| {
                    assert!(c.is_integer());
                    c.to_integer().try_into().unwrap()
                })
                .collect()
        };
        assert_eq!(to_i64(cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(to_i64(cyclotomic_polynomial(6)), vec![1, -1, 1]);
        assert_eq!(to_i64(cyclotomic_polynomial(8)), vec![1, 0, 0, 0, 1]);
        assert_eq!(to_i64(cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn literal_round_trip() {
        for s in ["1/2 z(8)^3 + z(8)", "-1", "z(6)^2 - 1", "3/4", "2 z(5)^4 - 1/3 z(5)^2 + 7"] {
            let v = parse_cyclotomic(s).unwrap();
            let printed = v.to_string();
            let reparsed = parse_cyclotomic(&printed).unwrap();
            assert_eq!(v, reparsed, "{} -> {}", s, printed);
        }
        assert!(parse_cyclotomic("z(0)").is_err());
        assert!(parse_cyclotomic("1//2").is_err());
        assert!(parse_cyclotomic("q(3)").is_err());
    }

    #[test]
    fn as_rational() {
        assert_eq!(
            Cyclotomic::root_of_unity(2, 1).as_rational(),
            Some(rat_int(-1))
        );
        assert_eq!(Cyclotomic::root_of_unity(5, 1).as_rational(), None);
    }
}
