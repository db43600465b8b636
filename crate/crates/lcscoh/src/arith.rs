//! Integer-polynomial and finite-field procedures: the Inoue surface
//! reality test, bounded Mostow-condition checks, Sturm root counting,
//! mod-p factorization patterns, the van der Waerden construction of
//! polynomials with prescribed real-root count and full symmetric Galois
//! group, and the quartic resolvent certificate.
//!
//! Everything here is exact: arbitrary-precision integers, no floating
//! point anywhere.

use std::fmt;

use num::{Integer, One, Signed, Zero};
use thiserror::Error;

use crate::scalar::{Q, Z};

#[derive(Debug, Error)]
pub enum ArithError {
    #[error("matrix determinant is {0}, expected 1")]
    DeterminantNotOne(Z),
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("cubic does not have one real root > 1 and a complex pair: {0}")]
    WrongRootPattern(String),
    #[error("leading coefficient vanishes modulo {0}")]
    LeadingCoefficientVanishes(u64),
    #[error("search exhausted: no hit with coefficients in [-{box_radius},{box_radius}]")]
    SearchExhausted { box_radius: i64 },
    #[error("certificate not applicable: {0}")]
    CertificateNotApplicable(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

// ---------------------------------------------------------------------
// integer polynomials

/// Dense univariate polynomial over ℤ, coefficients ascending, trailing
/// zeros trimmed (the zero polynomial has an empty list).
#[derive(Clone, PartialEq, Eq)]
pub struct IntPoly {
    c: Vec<Z>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { c: Vec::new() }
    }

    pub fn constant(v: i64) -> Self {
        IntPoly::from_coeffs(vec![Z::from(v)])
    }

    /// Ascending coefficients: `c[i]` multiplies x^i.
    pub fn from_coeffs(c: Vec<Z>) -> Self {
        let mut p = IntPoly { c };
        p.trim();
        p
    }

    /// Convenience: descending i64 coefficients, the way polynomials are
    /// usually written. `desc(&[1, 0, 0, -1, -1])` is x⁴ − x − 1.
    pub fn desc(coeffs: &[i64]) -> Self {
        IntPoly::from_coeffs(coeffs.iter().rev().map(|&v| Z::from(v)).collect())
    }

    fn trim(&mut self) {
        while self.c.last().map(|v| v.is_zero()).unwrap_or(false) {
            self.c.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> Z {
        self.c.get(i).cloned().unwrap_or_else(Z::zero)
    }

    pub fn coeffs(&self) -> &[Z] {
        &self.c
    }

    pub fn leading(&self) -> Z {
        self.c.last().cloned().unwrap_or_else(Z::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.c.len().max(other.c.len());
        let c = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        IntPoly::from_coeffs(c)
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.c.len().max(other.c.len());
        let c = (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect();
        IntPoly::from_coeffs(c)
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::from_coeffs(self.c.iter().map(|v| -v).collect())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![Z::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(c)
    }

    pub fn scale(&self, s: &Z) -> IntPoly {
        IntPoly::from_coeffs(self.c.iter().map(|v| v * s).collect())
    }

    pub fn derivative(&self) -> IntPoly {
        if self.c.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::from_coeffs(
            self.c[1..]
                .iter()
                .enumerate()
                .map(|(i, v)| v * Z::from(i as u64 + 1))
                .collect(),
        )
    }

    pub fn eval_z(&self, x: &Z) -> Z {
        let mut acc = Z::zero();
        for v in self.c.iter().rev() {
            acc = acc * x + v;
        }
        acc
    }

    pub fn eval_q(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for v in self.c.iter().rev() {
            acc = acc * x + Q::from(v.clone());
        }
        acc
    }

    /// Sign of p(a/b) for b > 0: evaluates Σ cᵢ aⁱ b^{deg−i}, avoiding
    /// rational arithmetic.
    pub fn sign_at(&self, x: &Q) -> i32 {
        let a = x.numer();
        let b = x.denom();
        let deg = match self.degree() {
            None => return 0,
            Some(d) => d,
        };
        let mut acc = Z::zero();
        let mut bpow = Z::one();
        // Horner in a, multiplying through by b^deg
        for i in (0..=deg).rev() {
            acc = acc * a + &self.c[i] * &bpow;
            if i > 0 {
                bpow *= b;
            }
        }
        sign_z(&acc)
    }

    /// Euclidean division by a monic divisor; exact over ℤ.
    pub fn divrem_monic(&self, div: &IntPoly) -> (IntPoly, IntPoly) {
        assert!(div.is_monic(), "divisor must be monic");
        let d = div.c.len() - 1;
        let mut rem = self.c.clone();
        if rem.len() <= d {
            return (IntPoly::zero(), self.clone());
        }
        let mut quot = vec![Z::zero(); rem.len() - d];
        for i in (d..rem.len()).rev() {
            let q = rem[i].clone();
            if q.is_zero() {
                continue;
            }
            quot[i - d] = q.clone();
            for j in 0..=d {
                let t = &div.c[j] * &q;
                rem[i - d + j] -= t;
            }
        }
        (IntPoly::from_coeffs(quot), IntPoly::from_coeffs(rem))
    }

    /// Content: positive gcd of the coefficients (0 for the zero
    /// polynomial).
    pub fn content(&self) -> Z {
        let mut g = Z::zero();
        for v in &self.c {
            g = g.gcd(v);
        }
        g
    }

    /// Divides out the content, keeping the sign of the leading
    /// coefficient.
    pub fn primitive(&self) -> IntPoly {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        IntPoly::from_coeffs(self.c.iter().map(|v| v / &g).collect())
    }

    /// Primitive gcd via the subresultant-style remainder sequence.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.is_zero() {
            return positive_lc(b);
        }
        while !b.is_zero() {
            let r = pseudo_rem_positive(&a, &b).primitive();
            a = b;
            b = r;
        }
        positive_lc(a)
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None | Some(0) => true,
            _ => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// Composition with a rational shift x ↦ x + t, returning rational
    /// coefficients (used to depress quartics).
    pub fn shift_q(&self, t: &Q) -> Vec<Q> {
        // Horner on p(x + t): repeatedly divide by (x − (−t))
        let mut coeffs: Vec<Q> = self.c.iter().map(|v| Q::from(v.clone())).collect();
        if coeffs.is_empty() {
            return coeffs;
        }
        let n = coeffs.len();
        for i in 0..n - 1 {
            for j in (i..n - 1).rev() {
                let add = coeffs[j + 1].clone() * t;
                coeffs[j] += add;
            }
        }
        coeffs
    }
}

/// Flips the sign so the leading coefficient is positive (gcds are
/// returned in this normal form).
fn positive_lc(p: IntPoly) -> IntPoly {
    if p.leading().is_negative() {
        p.neg()
    } else {
        p
    }
}

/// Pseudo-remainder scaled by an even power of the leading coefficient,
/// so the result is the true remainder times a positive constant (this
/// keeps Sturm sign sequences faithful).
fn pseudo_rem_positive(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let da = a.degree().expect("a nonzero");
    let db = b.degree().expect("b nonzero");
    if da < db {
        return a.clone();
    }
    let mut e = da - db + 1;
    if e % 2 == 1 {
        e += 1;
    }
    let lc = b.leading();
    let mut rem = a.scale(&num::pow::pow(lc.clone(), e));
    while let Some(dr) = rem.degree() {
        if dr < db {
            break;
        }
        let q = rem.leading() / &lc; // exact by construction of the scaling
        let mut t = vec![Z::zero(); dr - db];
        t.push(q);
        let tp = IntPoly::from_coeffs(t);
        rem = rem.sub(&tp.mul(b));
    }
    rem
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for i in (0..self.c.len()).rev() {
            let v = &self.c[i];
            if v.is_zero() {
                continue;
            }
            let (sign, abs) = if v.is_negative() {
                ("-", -v)
            } else {
                ("+", v.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            let show_coeff = !abs.is_one() || i == 0;
            if show_coeff {
                write!(f, "{abs}")?;
            }
            if i > 0 {
                if show_coeff {
                    write!(f, "*")?;
                }
                write!(f, "x")?;
                if i > 1 {
                    write!(f, "^{i}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses polynomials like `x^4-x-1`, `X^3 + 4X + 1`, `2*x^2 - 5`.
pub fn parse_intpoly(s: &str) -> Result<IntPoly, ArithError> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(ArithError::InvalidInput("empty polynomial".into()));
    }
    let bytes = compact.as_bytes();
    let mut pos = 0usize;
    let mut acc = IntPoly::zero();
    let mut first = true;
    while pos < bytes.len() {
        let mut neg = false;
        match bytes[pos] {
            b'+' => pos += 1,
            b'-' => {
                neg = true;
                pos += 1;
            }
            _ if first => {}
            _ => {
                return Err(ArithError::InvalidInput(format!(
                    "expected '+' or '-' at byte {pos} of {compact:?}"
                )))
            }
        }
        first = false;
        // optional integer coefficient
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        let mut coeff = if pos > start {
            compact[start..pos]
                .parse::<Z>()
                .map_err(|e| ArithError::InvalidInput(e.to_string()))?
        } else {
            Z::one()
        };
        if neg {
            coeff = -coeff;
        }
        if pos < bytes.len() && bytes[pos] == b'*' {
            pos += 1;
        }
        let mut exp = 0usize;
        if pos < bytes.len() && (bytes[pos] == b'x' || bytes[pos] == b'X') {
            pos += 1;
            exp = 1;
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                let es = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos == es {
                    return Err(ArithError::InvalidInput(format!(
                        "missing exponent at byte {pos} of {compact:?}"
                    )));
                }
                exp = compact[es..pos]
                    .parse()
                    .map_err(|e: std::num::ParseIntError| ArithError::InvalidInput(e.to_string()))?;
            }
        } else if pos == start {
            return Err(ArithError::InvalidInput(format!(
                "expected a term at byte {pos} of {compact:?}"
            )));
        }
        let mut term = vec![Z::zero(); exp + 1];
        term[exp] = coeff;
        acc = acc.add(&IntPoly::from_coeffs(term));
    }
    Ok(acc)
}

fn sign_z(v: &Z) -> i32 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

// ---------------------------------------------------------------------
// integer factorization (for rational root candidates)

/// Deterministic Miller–Rabin below this bound with the first twelve
/// prime bases.
fn mr_deterministic_bound() -> Z {
    "3317044064679887385961981".parse().unwrap()
}

fn miller_rabin_probable_prime(n: &Z) -> bool {
    use num::bigint::ToBigInt;
    if *n < Z::from(2) {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let p = Z::from(small);
        if *n == p {
            return true;
        }
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = Z::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let nu = n.to_biguint().unwrap();
    'bases: for base in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let b = num::BigUint::from(base);
        let du = d.to_biguint().unwrap();
        let mut x = b.modpow(&du, &nu);
        let xz = x.to_bigint().unwrap();
        if xz.is_one() || xz == n_minus_1 {
            continue;
        }
        for _ in 0..s.saturating_sub(1) {
            x = (&x * &x) % &nu;
            if x.to_bigint().unwrap() == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Brent-cycle Pollard rho; returns a nontrivial factor of an odd
/// composite, or None when the iteration budget runs out.
fn pollard_rho(n: &Z, budget: u64) -> Option<Z> {
    let one = Z::one();
    for c in 1u64..20 {
        let cc = Z::from(c);
        let mut x = Z::from(2);
        let mut y = Z::from(2);
        let mut d = Z::one();
        let mut steps = 0u64;
        while d.is_one() {
            if steps > budget {
                break;
            }
            x = (&x * &x + &cc) % n;
            y = (&y * &y + &cc) % n;
            y = (&y * &y + &cc) % n;
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(n);
            steps += 1;
        }
        if d > one && &d < n {
            return Some(d);
        }
    }
    None
}

/// Full factorization of |n| ≥ 1, or None when a cofactor resists the
/// trial-division / Miller–Rabin / Pollard-rho cascade (huge unresolved
/// composites are reported symbolically by callers, never guessed).
pub fn factor_integer(n: &Z) -> Option<Vec<(Z, u32)>> {
    let mut n = n.abs();
    if n.is_zero() {
        return None;
    }
    let mut out: Vec<(Z, u32)> = Vec::new();
    let push = |p: Z, out: &mut Vec<(Z, u32)>| {
        if let Some(last) = out.iter_mut().find(|(q, _)| *q == p) {
            last.1 += 1;
        } else {
            out.push((p, 1));
        }
    };
    for small in 2u64..=1_000_000 {
        if n.is_one() {
            break;
        }
        let p = Z::from(small);
        if &p * &p > n {
            break;
        }
        while (&n % &p).is_zero() {
            n /= &p;
            push(p.clone(), &mut out);
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if m >= mr_deterministic_bound() {
            // beyond the deterministic Miller–Rabin range: give up rather
            // than certify primality probabilistically
            return None;
        }
        if miller_rabin_probable_prime(&m) {
            push(m, &mut out);
            continue;
        }
        let f = pollard_rho(&m, 1 << 22)?;
        let q = &m / &f;
        stack.push(f);
        stack.push(q);
    }
    out.sort();
    Some(out)
}

/// All positive divisors from a factorization, or None when there are
/// more than the cap (candidate explosion guard).
fn divisors(factors: &[(Z, u32)], cap: usize) -> Option<Vec<Z>> {
    let mut divs = vec![Z::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
        let mut pe = Z::one();
        for _ in 0..=*e {
            for d in &divs {
                next.push(d * &pe);
            }
            pe *= p;
        }
        divs = next;
        if divs.len() > cap {
            return None;
        }
    }
    divs.sort();
    Some(divs)
}

/// Rational roots with multiplicities, plus the rational-root-free
/// cofactor. None when the constant or leading coefficient cannot be
/// factored.
#[derive(Clone, Debug)]
pub struct RationalRoots {
    pub roots: Vec<(Q, usize)>,
    pub cofactor: IntPoly,
}

pub fn rational_roots(p: &IntPoly) -> Option<RationalRoots> {
    if p.is_zero() {
        return None;
    }
    let mut roots: Vec<(Q, usize)> = Vec::new();
    let mut work = p.primitive();
    // strip roots at zero
    let mut zero_mult = 0usize;
    while work.coeff(0).is_zero() && work.degree().unwrap_or(0) > 0 {
        work = IntPoly::from_coeffs(work.coeffs()[1..].to_vec());
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Q::zero(), zero_mult));
    }
    if work.degree().unwrap_or(0) == 0 {
        return Some(RationalRoots {
            roots,
            cofactor: work,
        });
    }
    let a0 = factor_integer(&work.coeff(0))?;
    let an = factor_integer(&work.leading())?;
    let ps = divisors(&a0, 100_000)?;
    let qs = divisors(&an, 100_000)?;
    'outer: for num_abs in &ps {
        for den in &qs {
            if !num_abs.gcd(den).is_one() {
                continue;
            }
            for sgn in [1i64, -1] {
                let cand = Q::new(num_abs * Z::from(sgn), den.clone());
                let mut mult = 0usize;
                while work.degree().unwrap_or(0) > 0 && work.eval_q(&cand).is_zero() {
                    // deflate by (den·x − sgn·num)
                    let lin =
                        IntPoly::from_coeffs(vec![-(num_abs * Z::from(sgn)), den.clone()]);
                    work = exact_div(&work, &lin);
                    mult += 1;
                }
                if mult > 0 {
                    roots.push((cand, mult));
                }
                if work.degree().unwrap_or(0) == 0 {
                    break 'outer;
                }
            }
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Some(RationalRoots {
        roots,
        cofactor: work.primitive(),
    })
}

/// Exact division for a known factor (panics if not exact).
fn exact_div(p: &IntPoly, div: &IntPoly) -> IntPoly {
    // scale p so the divisor acts like a monic one, then undo
    let lc = div.leading();
    let dd = div.degree().expect("nonzero divisor");
    let dp = p.degree().expect("nonzero dividend");
    assert!(dp >= dd);
    let scaled = p.scale(&num::pow::pow(lc.clone(), dp - dd + 1));
    let monic_like = IntPoly::from_coeffs(div.c.clone());
    let mut rem = scaled.c.clone();
    let mut quot = vec![Z::zero(); dp - dd + 1];
    for i in (dd..rem.len()).rev() {
        let q = &rem[i] / &lc;
        quot[i - dd] = q.clone();
        for j in 0..=dd {
            let t = &monic_like.c[j] * &q;
            rem[i - dd + j] -= t;
        }
    }
    let rem = IntPoly::from_coeffs(rem);
    assert!(rem.is_zero(), "division was not exact");
    IntPoly::from_coeffs(quot).primitive()
}

// ---------------------------------------------------------------------
// Sturm chains

/// Interval endpoint for root counting.
#[derive(Clone, Debug, PartialEq)]
pub enum Endpoint {
    NegInf,
    Val(Q),
    PosInf,
}

fn sturm_chain(p: &IntPoly) -> Vec<IntPoly> {
    let mut chain = vec![p.primitive(), p.derivative().primitive()];
    loop {
        let n = chain.len();
        let (a, b) = (&chain[n - 2], &chain[n - 1]);
        if b.is_zero() {
            chain.pop();
            break;
        }
        let r = pseudo_rem_positive(a, b);
        if r.is_zero() {
            break;
        }
        chain.push(r.neg().primitive());
    }
    chain
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut count = 0;
    let mut prev = 0i32;
    for s in signs {
        if s == 0 {
            continue;
        }
        if prev != 0 && s != prev {
            count += 1;
        }
        prev = s;
    }
    count
}

fn variations_at(chain: &[IntPoly], x: &Endpoint) -> usize {
    match x {
        Endpoint::Val(q) => variations(chain.iter().map(|p| p.sign_at(q))),
        Endpoint::PosInf => variations(chain.iter().map(|p| sign_z(&p.leading()))),
        Endpoint::NegInf => variations(chain.iter().map(|p| {
            let s = sign_z(&p.leading());
            match p.degree() {
                Some(d) if d % 2 == 1 => -s,
                _ => s,
            }
        })),
    }
}

/// Number of distinct real roots of a squarefree polynomial in (lo, hi].
///
/// ```
/// use lcscoh::arith::{sturm_count, Endpoint, IntPoly};
/// let f = IntPoly::desc(&[1, 0, 0, -1, -1]); // x⁴ − x − 1
/// assert_eq!(sturm_count(&f, &Endpoint::NegInf, &Endpoint::PosInf).unwrap(), 2);
/// ```
pub fn sturm_count(p: &IntPoly, lo: &Endpoint, hi: &Endpoint) -> Result<usize, ArithError> {
    if !p.is_squarefree() {
        return Err(ArithError::NotSquarefree);
    }
    if p.degree().unwrap_or(0) == 0 {
        return Ok(0);
    }
    Ok(roots_up_to(p, hi).saturating_sub(roots_up_to(p, lo)))
}

/// Roots in (−∞, x]: the usual Sturm count, with a root exactly at a
/// finite x handled by deflation (Sturm's theorem itself assumes the
/// endpoints are not roots).
fn roots_up_to(p: &IntPoly, x: &Endpoint) -> usize {
    match x {
        Endpoint::NegInf => 0,
        Endpoint::PosInf => {
            let chain = sturm_chain(p);
            variations_at(&chain, &Endpoint::NegInf) - variations_at(&chain, &Endpoint::PosInf)
        }
        Endpoint::Val(q) => {
            if p.eval_q(q).is_zero() {
                let lin = IntPoly::from_coeffs(vec![-q.numer().clone(), q.denom().clone()]);
                let deflated = exact_div(p, &lin);
                if deflated.degree().unwrap_or(0) == 0 {
                    return 1;
                }
                return 1 + roots_up_to(&deflated, x);
            }
            let chain = sturm_chain(p);
            variations_at(&chain, &Endpoint::NegInf) - variations_at(&chain, x)
        }
    }
}

/// Total number of distinct real roots (fast path for search loops):
/// signed-i128 chain when it fits, BigInt fallback on overflow.
pub fn real_root_count(p: &IntPoly) -> Result<usize, ArithError> {
    if !p.is_squarefree() {
        return Err(ArithError::NotSquarefree);
    }
    if let Some(count) = real_root_count_i128(p) {
        return Ok(count);
    }
    let chain = sturm_chain(p);
    Ok(variations_at(&chain, &Endpoint::NegInf) - variations_at(&chain, &Endpoint::PosInf))
}

fn real_root_count_i128(p: &IntPoly) -> Option<usize> {
    use num::ToPrimitive;
    let coeffs: Option<Vec<i128>> = p.c.iter().map(|v| v.to_i128()).collect();
    let mut a = small_primitive(coeffs?)?;
    let mut b = small_primitive(small_derivative(&a))?;
    let mut chain = vec![a.clone(), b.clone()];
    while !b.is_empty() {
        let mut r = small_prem_positive(&a, &b)?;
        if r.is_empty() {
            break;
        }
        for v in &mut r {
            *v = v.checked_neg()?;
        }
        let r = small_primitive(r)?;
        a = b;
        b = r;
        chain.push(b.clone());
    }
    let sign = |v: i128| -> i32 {
        match v.cmp(&0) {
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => 1,
        }
    };
    let live = || chain.iter().filter(|c| !c.is_empty());
    let at_pinf = variations(live().map(|c| sign(*c.last().unwrap())));
    let at_ninf = variations(live().map(|c| {
        let s = sign(*c.last().unwrap());
        if (c.len() - 1) % 2 == 1 {
            -s
        } else {
            s
        }
    }));
    Some(at_ninf - at_pinf)
}

fn small_derivative(c: &[i128]) -> Vec<i128> {
    if c.len() <= 1 {
        return Vec::new();
    }
    c[1..]
        .iter()
        .enumerate()
        .map(|(i, v)| v * (i as i128 + 1))
        .collect()
}

fn small_trim(mut c: Vec<i128>) -> Vec<i128> {
    while c.last() == Some(&0) {
        c.pop();
    }
    c
}

fn small_primitive(c: Vec<i128>) -> Option<Vec<i128>> {
    let c = small_trim(c);
    if c.is_empty() {
        return Some(c);
    }
    let mut g: i128 = 0;
    for v in &c {
        g = small_gcd(g, v.abs());
    }
    Some(c.into_iter().map(|v| v / g).collect())
}

fn small_gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.abs()
}

fn small_prem_positive(a: &[i128], b: &[i128]) -> Option<Vec<i128>> {
    let da = a.len() - 1;
    let db = b.len() - 1;
    if da < db {
        return Some(a.to_vec());
    }
    let mut e = da - db + 1;
    if e % 2 == 1 {
        e += 1;
    }
    let lc = *b.last().unwrap();
    let mut mult: i128 = 1;
    for _ in 0..e {
        mult = mult.checked_mul(lc)?;
    }
    let mut rem: Vec<i128> = a.iter().map(|v| v.checked_mul(mult)).collect::<Option<_>>()?;
    for i in (db..rem.len()).rev() {
        if rem[i] == 0 {
            continue;
        }
        let q = rem[i] / lc;
        for j in 0..=db {
            let t = b[j].checked_mul(q)?;
            rem[i - db + j] = rem[i - db + j].checked_sub(t)?;
        }
    }
    Some(small_trim(rem))
}

// ---------------------------------------------------------------------
// mod-p polynomial factorization patterns

/// Multiset of degrees (with multiplicity) of the irreducible factors of
/// a polynomial reduced mod p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorPattern {
    pub prime: u64,
    pub degrees: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
struct PolyP {
    p: u64,
    c: Vec<u64>, // ascending, trimmed
}

impl PolyP {
    fn from_int(poly: &IntPoly, p: u64) -> Self {
        let pz = Z::from(p);
        let c = poly
            .c
            .iter()
            .map(|v| {
                let r = v.mod_floor(&pz);
                use num::ToPrimitive;
                r.to_u64().unwrap()
            })
            .collect();
        PolyP { p, c }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
        self
    }

    fn zero(p: u64) -> Self {
        PolyP { p, c: Vec::new() }
    }

    fn x(p: u64) -> Self {
        PolyP { p, c: vec![0, 1] }
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn deg(&self) -> usize {
        assert!(!self.is_zero());
        self.c.len() - 1
    }

    fn inv_mod(&self, a: u64) -> u64 {
        // Fermat: p prime
        pow_mod_u64(a, self.p - 2, self.p)
    }

    fn monic(&self) -> PolyP {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.inv_mod(*self.c.last().unwrap());
        PolyP {
            p: self.p,
            c: self.c.iter().map(|&v| v * inv % self.p).collect(),
        }
        .trimmed()
    }

    fn sub(&self, other: &PolyP) -> PolyP {
        let n = self.c.len().max(other.c.len());
        let c = (0..n)
            .map(|i| {
                let a = self.c.get(i).copied().unwrap_or(0);
                let b = other.c.get(i).copied().unwrap_or(0);
                (a + self.p - b) % self.p
            })
            .collect();
        PolyP { p: self.p, c }.trimmed()
    }

    fn mul(&self, other: &PolyP) -> PolyP {
        if self.is_zero() || other.is_zero() {
            return PolyP::zero(self.p);
        }
        let mut c = vec![0u64; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                c[i + j] = (c[i + j] + a * b) % self.p;
            }
        }
        PolyP { p: self.p, c }.trimmed()
    }

    fn rem(&self, div: &PolyP) -> PolyP {
        assert!(!div.is_zero());
        let dd = div.deg();
        let lc_inv = self.inv_mod(*div.c.last().unwrap());
        let mut rem = self.c.clone();
        while rem.len() > dd {
            let i = rem.len() - 1;
            let q = rem[i] * lc_inv % self.p;
            if q != 0 {
                for j in 0..=dd {
                    let t = div.c[j] * q % self.p;
                    rem[i - dd + j] = (rem[i - dd + j] + self.p - t) % self.p;
                }
            }
            rem.pop();
        }
        PolyP { p: self.p, c: rem }.trimmed()
    }

    fn divide(&self, div: &PolyP) -> PolyP {
        assert!(!div.is_zero());
        let dd = div.deg();
        let lc_inv = self.inv_mod(*div.c.last().unwrap());
        let mut rem = self.c.clone();
        let mut quot = vec![0u64; rem.len().saturating_sub(dd)];
        while rem.len() > dd {
            let i = rem.len() - 1;
            let q = rem[i] * lc_inv % self.p;
            if q != 0 {
                quot[i - dd] = q;
                for j in 0..=dd {
                    let t = div.c[j] * q % self.p;
                    rem[i - dd + j] = (rem[i - dd + j] + self.p - t) % self.p;
                }
            }
            rem.pop();
        }
        let r = PolyP { p: self.p, c: rem }.trimmed();
        assert!(r.is_zero(), "mod-p division was not exact");
        PolyP { p: self.p, c: quot }.trimmed()
    }

    fn gcd(&self, other: &PolyP) -> PolyP {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    fn derivative(&self) -> PolyP {
        if self.c.len() <= 1 {
            return PolyP::zero(self.p);
        }
        let c = self.c[1..]
            .iter()
            .enumerate()
            .map(|(i, &v)| v * ((i as u64 + 1) % self.p) % self.p)
            .collect();
        PolyP { p: self.p, c }.trimmed()
    }

    /// self^p mod f (Frobenius step), square-and-multiply on the small
    /// exponent p.
    fn frobenius_mod(&self, f: &PolyP) -> PolyP {
        let mut result = PolyP { p: self.p, c: vec![1] };
        let mut base = self.rem(f);
        let mut e = self.p;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).rem(f);
            }
            base = base.mul(&base).rem(f);
            e >>= 1;
        }
        result
    }

    /// p-th root of a polynomial with vanishing derivative: over the
    /// prime field, f(x) = g(x^p) = g(x)^p with the same coefficients.
    fn pth_root(&self) -> PolyP {
        let step = self.p as usize;
        let c = self.c.iter().copied().step_by(step).collect();
        PolyP { p: self.p, c }.trimmed()
    }
}

fn pow_mod_u64(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}

/// Distinct-degree factorization degrees of a monic squarefree f.
fn ddf_degrees(f: &PolyP) -> Vec<usize> {
    let mut s = f.monic();
    let mut degrees = Vec::new();
    let mut t = PolyP::x(f.p).rem(&s);
    let mut d = 0usize;
    while !s.is_zero() && s.deg() > 0 && 2 * (d + 1) <= s.deg() {
        d += 1;
        t = t.frobenius_mod(&s);
        let g = s.gcd(&t.sub(&PolyP::x(f.p).rem(&s)));
        if !g.is_zero() && g.deg() > 0 {
            for _ in 0..g.deg() / d {
                degrees.push(d);
            }
            s = s.divide(&g);
            if s.deg() == 0 {
                break;
            }
            t = t.rem(&s);
        }
    }
    if s.deg() > 0 {
        degrees.push(s.deg());
    }
    degrees
}

fn pattern_rec(f: &PolyP) -> Vec<usize> {
    if f.is_zero() || f.deg() == 0 {
        return Vec::new();
    }
    let fp = f.derivative();
    if fp.is_zero() {
        let root = f.pth_root();
        let inner = pattern_rec(&root);
        let mut out = Vec::with_capacity(inner.len() * f.p as usize);
        for _ in 0..f.p {
            out.extend_from_slice(&inner);
        }
        return out;
    }
    let w = f.gcd(&fp);
    let s = f.divide(&w).monic(); // squarefree part
    let mut degrees = ddf_degrees(&s);
    let rest = f.divide(&s);
    degrees.extend(pattern_rec(&rest));
    degrees
}

/// Degrees (with multiplicity) of the irreducible factors of p mod the
/// given prime, by distinct-degree factorization.
///
/// ```
/// use lcscoh::arith::{factor_pattern, IntPoly};
/// let f = IntPoly::desc(&[1, 0, 0, -1, -1]); // x⁴ − x − 1
/// assert_eq!(factor_pattern(&f, 2).unwrap().degrees, vec![4]);
/// ```
pub fn factor_pattern(poly: &IntPoly, prime: u64) -> Result<FactorPattern, ArithError> {
    let reduced = PolyP::from_int(poly, prime);
    if reduced.is_zero() || reduced.deg() != poly.degree().unwrap_or(0) {
        return Err(ArithError::LeadingCoefficientVanishes(prime));
    }
    let mut degrees = pattern_rec(&reduced.monic());
    degrees.sort();
    Ok(FactorPattern { prime, degrees })
}

// ---------------------------------------------------------------------
// characteristic polynomial of SL(3, Z) matrices and root classification

/// Characteristic polynomial x³ − a·x² + b·x − 1 of a 3×3 integer matrix
/// with determinant 1 (a = trace, b = sum of principal 2-minors).
pub fn char_poly_3(m: &[[Z; 3]; 3]) -> Result<IntPoly, ArithError> {
    let det = det3(m);
    if !det.is_one() {
        return Err(ArithError::DeterminantNotOne(det));
    }
    let a = &m[0][0] + &m[1][1] + &m[2][2];
    let minor = |i: usize, j: usize| -> Z {
        &m[i][i] * &m[j][j] - &m[i][j] * &m[j][i]
    };
    let b = minor(0, 1) + minor(0, 2) + minor(1, 2);
    Ok(IntPoly::from_coeffs(vec![-Z::one(), b, -a, Z::one()]))
}

fn det3(m: &[[Z; 3]; 3]) -> Z {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

pub fn companion_matrix_3(p: &IntPoly) -> Result<[[Z; 3]; 3], ArithError> {
    if p.degree() != Some(3) || !p.is_monic() {
        return Err(ArithError::InvalidInput("expected a monic cubic".into()));
    }
    let c0 = p.coeff(0);
    let c1 = p.coeff(1);
    let c2 = p.coeff(2);
    Ok([
        [Z::zero(), Z::zero(), -c0],
        [Z::one(), Z::zero(), -c1],
        [Z::zero(), Z::one(), -c2],
    ])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CubicRootClass {
    ThreeReal,
    OneRealPairComplex,
}

#[derive(Clone, Debug)]
pub struct CubicClassification {
    pub class: CubicRootClass,
    /// Whether some real root exceeds 1 (Sturm count on (1, ∞)).
    pub real_root_exceeds_one: bool,
    pub discriminant: Z,
}

/// Root layout of a squarefree monic cubic via the discriminant sign,
/// with the "real root > 1" flag certified by a Sturm count.
pub fn classify_cubic_roots(p: &IntPoly) -> Result<CubicClassification, ArithError> {
    if p.degree() != Some(3) || !p.is_monic() {
        return Err(ArithError::InvalidInput("expected a monic cubic".into()));
    }
    if !p.is_squarefree() {
        return Err(ArithError::NotSquarefree);
    }
    let disc = discriminant_cubic(p)?;
    let class = if disc.is_positive() {
        CubicRootClass::ThreeReal
    } else {
        // squarefree excludes disc = 0
        CubicRootClass::OneRealPairComplex
    };
    let above_one = sturm_count(p, &Endpoint::Val(Q::one()), &Endpoint::PosInf)? > 0;
    Ok(CubicClassification {
        class,
        real_root_exceeds_one: above_one,
        discriminant: disc,
    })
}

/// Δ = 18abc − 4a³c + a²b² − 4b³ − 27c² for a monic cubic x³+ax²+bx+c.
pub fn discriminant_cubic(p: &IntPoly) -> Result<Z, ArithError> {
    if p.degree() != Some(3) || !p.is_monic() {
        return Err(ArithError::InvalidInput("expected a monic cubic".into()));
    }
    let c = p.coeff(0);
    let b = p.coeff(1);
    let a = p.coeff(2);
    Ok(Z::from(18) * &a * &b * &c - Z::from(4) * &a * &a * &a * &c + &a * &a * &b * &b
        - Z::from(4) * &b * &b * &b
        - Z::from(27) * &c * &c)
}

// ---------------------------------------------------------------------
// Inoue S⁰ reality test and the bounded Mostow verdict

/// The bare power-basis recurrence: with β a root of x³ − ax² + bx − 1,
/// β^m = x_m β² + y_m β + z_m where x₃ = a, y₃ = −b, z₃ = 1 and
/// x_{k+1} = a·x_k + y_k, y_{k+1} = z_k − b·x_k, z_{k+1} = x_k.
/// Returns the first m in 3..=bound with x_m = y_m = 0 (β^m is then a
/// rational integer, so the argument of β is a rational angle).
pub fn reality_recurrence(a: &Z, b: &Z, bound: u64) -> Option<u64> {
    let mut x = a.clone();
    let mut y = -b.clone();
    let mut z = Z::one();
    for m in 3..=bound {
        if x.is_zero() && y.is_zero() {
            return Some(m);
        }
        let x1 = a * &x + &y;
        let y1 = &z - b * &x;
        z = std::mem::replace(&mut x, x1);
        y = y1;
        // note: z now holds the previous x
    }
    None
}

/// Validates the S⁰ root pattern (one real root α > 1, one complex
/// conjugate pair) for x³ − ax² + bx − 1, then runs the reality
/// recurrence: Some(m) means β^m ∈ ℝ for the complex eigenvalue β.
pub fn inoue_reality_test(a: &Z, b: &Z, bound: u64) -> Result<Option<u64>, ArithError> {
    let p = IntPoly::from_coeffs(vec![-Z::one(), b.clone(), -a.clone(), Z::one()]);
    let class = classify_cubic_roots(&p)
        .map_err(|e| ArithError::WrongRootPattern(e.to_string()))?;
    if class.class != CubicRootClass::OneRealPairComplex || !class.real_root_exceeds_one {
        return Err(ArithError::WrongRootPattern(format!(
            "{p} has discriminant {} and real-root-above-1 = {}",
            class.discriminant, class.real_root_exceeds_one
        )));
    }
    Ok(reality_recurrence(a, b, bound))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MostowVerdict {
    /// No rational angle with period ≤ 2N was found, so the Mostow
    /// condition holds for all angle denominators up to the bound.
    MostowHolds { bound: u64 },
    RationalAngleFound { m: u64 },
}

#[derive(Clone, Debug)]
pub struct S0Report {
    pub char_poly: IntPoly,
    pub verdict: MostowVerdict,
    /// Symbolic description of the eigenvalues of the associated real
    /// matrix logarithm, with a rational bracket for α.
    pub eigenvalue_summary: String,
}

/// Bounded Mostow-condition check for Inoue surfaces of type S⁰: the
/// semisimple part has eigenvalues α, β, β̄ with αβ β̄ = 1; a rational
/// angle arg β = qπ with q = p/m, m ≤ N, would force β^{2m} ∈ ℝ, which
/// the recurrence detects up to 2N.
pub fn gorbatsevich_s0_check(m: &[[Z; 3]; 3], n: u64) -> Result<S0Report, ArithError> {
    let p = char_poly_3(m)?;
    let a = -p.coeff(2);
    let b = p.coeff(1);
    let hit = inoue_reality_test(&a, &b, 2 * n)?;
    let verdict = match hit {
        Some(m) => MostowVerdict::RationalAngleFound { m },
        None => MostowVerdict::MostowHolds { bound: n },
    };
    let (lo, hi) = bracket_real_root(&p);
    let eigenvalue_summary = format!(
        "eigenvalues of the log matrix Z: lg α, −(lg α)/2 + i·s, −(lg α)/2 − i·s, \
         with α the unique real root of {p} (α ∈ ({lo}, {hi}]) and s = arg β",
    );
    Ok(S0Report {
        char_poly: p,
        verdict,
        eigenvalue_summary,
    })
}

/// Bisects to a width-1/64 rational bracket around the largest real root.
fn bracket_real_root(p: &IntPoly) -> (Q, Q) {
    // find an integer upper bound by doubling
    let mut hi = Q::one();
    while p.sign_at(&hi) <= 0 || sturm_count(p, &Endpoint::Val(hi.clone()), &Endpoint::PosInf)
        .unwrap_or(0)
        > 0
    {
        hi = hi * Q::from(Z::from(2));
        if hi > Q::from(Z::from(1 << 30)) {
            break;
        }
    }
    let mut lo = -hi.clone();
    let width = Q::new(Z::one(), Z::from(64));
    while &hi - &lo > width {
        let mid = (&hi + &lo) / Q::from(Z::from(2));
        if sturm_count(p, &Endpoint::Val(mid.clone()), &Endpoint::Val(hi.clone())).unwrap_or(0) > 0
        {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

// ---------------------------------------------------------------------
// quartic resolvent and the S₄ certificate

/// Resolvent cubic y³ − 2py² + (p²−4r)y + q² of a depressed monic quartic
/// x⁴ + px² + qx + r.
///
/// ```
/// use lcscoh::arith::{resolvent_cubic, IntPoly};
/// let f = IntPoly::desc(&[1, 0, 0, -1, -1]);
/// assert_eq!(resolvent_cubic(&f).unwrap(), IntPoly::desc(&[1, 0, 4, 1]));
/// ```
pub fn resolvent_cubic(quartic: &IntPoly) -> Result<IntPoly, ArithError> {
    if quartic.degree() != Some(4) || !quartic.is_monic() {
        return Err(ArithError::InvalidInput("expected a monic quartic".into()));
    }
    if !quartic.coeff(3).is_zero() {
        return Err(ArithError::InvalidInput(
            "expected a depressed quartic (no cubic term); depress first".into(),
        ));
    }
    let p = quartic.coeff(2);
    let q = quartic.coeff(1);
    let r = quartic.coeff(0);
    Ok(IntPoly::from_coeffs(vec![
        &q * &q,
        &p * &p - Z::from(4) * &r,
        Z::from(-2) * &p,
        Z::one(),
    ]))
}

#[derive(Clone, Debug)]
pub struct S4Certificate {
    pub quartic: IntPoly,
    pub irreducible_mod: u64,
    pub resolvent: IntPoly,
    pub resolvent_irreducible_mod: Option<u64>,
    pub discriminant: Z,
}

/// Certifies Gal(q) ≃ S₄ for a monic integer quartic by exhibiting
/// (1) a prime where q is irreducible, (2) the resolvent cubic with no
/// rational roots, (3) the discriminant not a perfect square. Failure of
/// any leg yields CertificateNotApplicable and proves nothing.
pub fn galois_s4_certificate(quartic: &IntPoly) -> Result<S4Certificate, ArithError> {
    if quartic.degree() != Some(4) || !quartic.is_monic() {
        return Err(ArithError::InvalidInput("expected a monic quartic".into()));
    }
    // leg 1: irreducibility witness mod a small prime
    let witness = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
        .into_iter()
        .find(|&p| {
            factor_pattern(quartic, p)
                .map(|fp| fp.degrees == vec![4])
                .unwrap_or(false)
        });
    let irreducible_mod = witness.ok_or_else(|| {
        ArithError::CertificateNotApplicable(
            "no small-prime irreducibility witness for the quartic".into(),
        )
    })?;
    // depress if needed (rational shift; the Galois group is unchanged)
    let resolvent = if quartic.coeff(3).is_zero() {
        resolvent_cubic(quartic)?
    } else {
        let shift = Q::new(-quartic.coeff(3), Z::from(4));
        let shifted = quartic.shift_q(&shift);
        // shifted is monic with rational coefficients [r, q, p, 0, 1]
        let p = shifted[2].clone();
        let q = shifted[1].clone();
        let r = shifted[0].clone();
        let y2 = Q::from(Z::from(-2)) * &p;
        let y1 = &p * &p - Q::from(Z::from(4)) * &r;
        let y0 = &q * &q;
        // clear denominators into a primitive integer polynomial with the
        // same rational roots (scale y; root test is all we need)
        let den = lcm_z(y2.denom(), &lcm_z(y1.denom(), y0.denom()));
        IntPoly::from_coeffs(vec![
            (&y0 * Q::from(den.clone())).to_integer(),
            (&y1 * Q::from(den.clone())).to_integer(),
            (&y2 * Q::from(den.clone())).to_integer(),
            den,
        ])
        .primitive()
    };
    // leg 2: resolvent has no rational roots (degree 3 ⟹ irreducible/ℚ)
    let rr = rational_roots(&resolvent).ok_or_else(|| {
        ArithError::CertificateNotApplicable("could not factor resolvent constants".into())
    })?;
    if !rr.roots.is_empty() {
        return Err(ArithError::CertificateNotApplicable(format!(
            "resolvent cubic {resolvent} has a rational root"
        )));
    }
    let resolvent_irreducible_mod = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
        .into_iter()
        .find(|&p| {
            factor_pattern(&resolvent, p)
                .map(|fp| fp.degrees == vec![3])
                .unwrap_or(false)
        });
    // leg 3: discriminant of the quartic = discriminant of its resolvent,
    // and it must not be a rational square
    let disc = if resolvent.is_monic() {
        discriminant_cubic(&resolvent)?
    } else {
        // non-monic only arises from the depression path; fall back to the
        // general cubic discriminant formula
        general_cubic_discriminant(&resolvent)
    };
    if is_perfect_square(&disc) {
        return Err(ArithError::CertificateNotApplicable(format!(
            "discriminant {disc} is a perfect square (Galois group inside A₄)"
        )));
    }
    Ok(S4Certificate {
        quartic: quartic.clone(),
        irreducible_mod,
        resolvent,
        resolvent_irreducible_mod,
        discriminant: disc,
    })
}

fn lcm_z(a: &Z, b: &Z) -> Z {
    (a * b).abs() / a.gcd(b)
}

fn general_cubic_discriminant(p: &IntPoly) -> Z {
    let a = p.coeff(3);
    let b = p.coeff(2);
    let c = p.coeff(1);
    let d = p.coeff(0);
    Z::from(18) * &a * &b * &c * &d - Z::from(4) * &b * &b * &b * &d + &b * &b * &c * &c
        - Z::from(4) * &a * &c * &c * &c
        - Z::from(27) * &a * &a * &d * &d
}

fn is_perfect_square(n: &Z) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

// ---------------------------------------------------------------------
// van der Waerden construction

#[derive(Clone, Debug)]
pub struct VdwCertificate {
    pub f1: IntPoly,
    pub f2: IntPoly,
    pub f3: IntPoly,
    pub g: IntPoly,
    /// Patterns of the assembled polynomial mod 2, 3, 5, re-verified on
    /// the final answer rather than inherited from the constituents.
    pub patterns: Vec<FactorPattern>,
    pub real_roots: usize,
}

/// Builds a monic degree-n integer polynomial with exactly s = n−2 real
/// roots, one complex conjugate pair, and Galois group Sₙ, following the
/// classical congruence recipe: f ≡ f₁ (mod 2) irreducible, f ≡ f₂
/// (mod 3) a linear times an irreducible of degree n−1, f ≡ f₃ (mod 5) a
/// quadratic times distinct odd-degree irreducibles; then f + 30g is
/// scanned over small g until the real-root count is exactly s.
pub fn vdw_polynomial(n: usize, s: usize) -> Result<(IntPoly, VdwCertificate), ArithError> {
    vdw_polynomial_seeded(n, s, None)
}

/// Same construction with an optional seed shuffling the search order
/// deterministically (None = smallest-first canonical order).
pub fn vdw_polynomial_seeded(
    n: usize,
    s: usize,
    seed: Option<u64>,
) -> Result<(IntPoly, VdwCertificate), ArithError> {
    if n != s + 2 || n < 3 {
        return Err(ArithError::InvalidInput(format!(
            "need n = s + 2 ≥ 3, got n = {n}, s = {s}"
        )));
    }
    let f1 = smallest_irreducible(2, n);
    let f2_lin = smallest_irreducible(3, 1);
    let f2_big = smallest_irreducible(3, n - 1);
    let f2 = f2_lin.mul(&f2_big);
    let f3 = if n % 2 == 1 {
        smallest_irreducible(5, 2).mul(&smallest_irreducible(5, n - 2))
    } else {
        // quadratic × linear × (n−3): all distinct, odd degrees besides
        // the quadratic
        let quad = smallest_irreducible(5, 2);
        let lin1 = smallest_irreducible(5, 1);
        if n == 4 {
            let lin2 = next_irreducible_after(5, 1, &lin1);
            quad.mul(&lin1).mul(&lin2)
        } else {
            quad.mul(&lin1).mul(&smallest_irreducible(5, n - 3))
        }
    };
    let f = f1
        .scale(&Z::from(-15))
        .add(&f2.scale(&Z::from(10)))
        .add(&f3.scale(&Z::from(6)));
    debug_assert!(f.is_monic() && f.degree() == Some(n));

    let expected_mod3: Vec<usize> = vec![1, n - 1];
    let expected_mod5: Vec<usize> = {
        let mut d = if n % 2 == 1 {
            vec![2, n - 2]
        } else if n == 4 {
            vec![2, 1, 1]
        } else {
            vec![2, 1, n - 3]
        };
        d.sort();
        d
    };
    for box_radius in [3i64, 4, 5, 6] {
        let mut found: Option<IntPoly> = None;
        for_each_in_box(n, box_radius, seed, |digits| {
            let g = IntPoly::from_coeffs(digits.iter().map(|&v| Z::from(v)).collect());
            let cand = f.add(&g.scale(&Z::from(30)));
            // irreducible mod 2 ⟹ irreducible over ℚ ⟹ squarefree
            if matches!(real_root_count(&cand), Ok(count) if count == s) {
                found = Some(g);
                return true;
            }
            false
        });
        if let Some(g) = found {
            let cand = f.add(&g.scale(&Z::from(30)));
            let patterns = vec![
                factor_pattern(&cand, 2)?,
                factor_pattern(&cand, 3)?,
                factor_pattern(&cand, 5)?,
            ];
            if patterns[0].degrees != vec![n]
                || patterns[1].degrees != expected_mod3
                || patterns[2].degrees != expected_mod5
            {
                // cannot happen: f + 30g ≡ fᵢ mod 2, 3, 5 by construction
                return Err(ArithError::InvalidInput(
                    "congruence pattern lost during the search".into(),
                ));
            }
            let real_roots = sturm_count(&cand, &Endpoint::NegInf, &Endpoint::PosInf)?;
            if real_roots != s {
                return Err(ArithError::InvalidInput(
                    "root count changed between the fast and certified paths".into(),
                ));
            }
            let cert = VdwCertificate {
                f1,
                f2,
                f3,
                g,
                patterns,
                real_roots,
            };
            return Ok((cand, cert));
        }
    }
    Err(ArithError::SearchExhausted { box_radius: 6 })
}

/// Walks coefficient tuples for g (degree < n) without materializing the
/// box: each coordinate runs through 0, 1, −1, 2, −2, … and tuples are
/// enumerated in lexicographic order of that digit encoding, so small
/// polynomials come first and the first hit is reproducible. A seed
/// deterministically shuffles the digit order per coordinate. Stops when
/// the visitor returns true.
fn for_each_in_box(n: usize, radius: i64, seed: Option<u64>, mut visit: impl FnMut(&[i64]) -> bool) {
    let base: Vec<i64> = {
        let mut d = vec![0i64];
        for v in 1..=radius {
            d.push(v);
            d.push(-v);
        }
        d
    };
    let width = base.len();
    let per_slot: Vec<Vec<i64>> = match seed {
        None => vec![base; n],
        Some(seed) => {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            (0..n)
                .map(|_| {
                    let mut d = base.clone();
                    d.shuffle(&mut rng);
                    d
                })
                .collect()
        }
    };
    let mut current = vec![0usize; n];
    let mut digits = vec![0i64; n];
    loop {
        for i in 0..n {
            digits[i] = per_slot[i][current[i]];
        }
        if visit(&digits) {
            return;
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            if current[pos] + 1 < width {
                current[pos] += 1;
                break;
            }
            current[pos] = 0;
        }
    }
}

/// Smallest monic irreducible of the given degree mod p, by enumeration
/// in coefficient order (constant term first).
fn smallest_irreducible(p: u64, degree: usize) -> IntPoly {
    next_irreducible_after(p, degree, &IntPoly::zero())
}

fn next_irreducible_after(p: u64, degree: usize, prev: &IntPoly) -> IntPoly {
    let total = (p as u128).pow(degree as u32);
    let prev_code = encode_base_p(prev, p, degree);
    for code in 0..total {
        if code <= prev_code && !prev.is_zero() {
            continue;
        }
        let mut digits = Vec::with_capacity(degree + 1);
        let mut c = code;
        for _ in 0..degree {
            digits.push(Z::from((c % p as u128) as u64));
            c /= p as u128;
        }
        digits.push(Z::one());
        let cand = IntPoly::from_coeffs(digits);
        if factor_pattern(&cand, p)
            .map(|fp| fp.degrees == vec![degree])
            .unwrap_or(false)
        {
            return cand;
        }
    }
    unreachable!("irreducibles of every degree exist over F_p")
}

fn encode_base_p(poly: &IntPoly, p: u64, degree: usize) -> u128 {
    use num::ToPrimitive;
    let mut code = 0u128;
    for i in (0..degree).rev() {
        let v = poly.coeff(i).mod_floor(&Z::from(p)).to_u128().unwrap_or(0);
        code = code * p as u128 + v;
    }
    code
}
