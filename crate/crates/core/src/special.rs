//! Bernoulli and Euler numbers as exact rationals, and zeta-type special
//! values with explicit error bounds.

use std::fmt;
use std::sync::Mutex;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::complex::pi;
use crate::error::{invalid, Result};

/// A rational in lowest terms with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExactRational(Rational);

impl ExactRational {
    pub fn numerator(&self) -> &Integer {
        self.0.numer()
    }

    pub fn denominator(&self) -> &Integer {
        self.0.denom()
    }

    pub fn as_rational(&self) -> &Rational {
        &self.0
    }

    pub fn to_float(&self, prec: u32) -> Float {
        Float::with_val(prec, &self.0)
    }
}

impl From<Rational> for ExactRational {
    fn from(r: Rational) -> Self {
        ExactRational(r)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A real value with a bound on its absolute error.
#[derive(Clone, Debug, PartialEq)]
pub struct RealValue {
    pub value: Float,
    pub error_bound: Float,
}

impl RealValue {
    fn rounded(value: Float) -> Self {
        let error_bound = ulp_bound(&value);
        RealValue { value, error_bound }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

/// `|x| 2^{1-prec}`, a bound on one correctly rounded step plus a guarded
/// computation feeding it.
fn ulp_bound(x: &Float) -> Float {
    let prec = x.prec();
    let mut b = Float::with_val(prec, x.abs_ref());
    b >>= prec - 1;
    b
}

static BERNOULLI: Mutex<Vec<Rational>> = Mutex::new(Vec::new());
static EULER: Mutex<Vec<Integer>> = Mutex::new(Vec::new());

/// `B_n` from `sum_{k=0}^{n} C(n+1, k) B_k = 0` (so `B_1 = -1/2`).
pub fn bernoulli(n: i64) -> Result<ExactRational> {
    let n = usize::try_from(n).map_err(|_| invalid("Bernoulli index must be nonnegative"))?;
    Ok(ExactRational(bernoulli_rational(n)))
}

pub(crate) fn bernoulli_rational(n: usize) -> Rational {
    let mut table = BERNOULLI.lock().unwrap_or_else(|e| e.into_inner());
    if table.is_empty() {
        table.push(Rational::from(1));
    }
    while table.len() <= n {
        let m = table.len();
        // sum_{k<m} C(m+1, k) B_k = -(m+1) B_m
        let mut sum = Rational::new();
        let mut binom = Integer::from(1);
        for (k, b) in table.iter().enumerate() {
            if !b.is_zero() {
                sum += Rational::from(&binom * b.numer()) / b.denom();
            }
            binom *= m + 1 - k;
            binom /= k + 1;
        }
        table.push(-sum / Integer::from(m + 1));
    }
    table[n].clone()
}

/// `E_n` from `2/(e^t + e^{-t}) = sum E_n t^n / n!`, through
/// `sum_{k even} C(n, k) E_{n-k} = 0` for `n >= 1`.
pub fn euler_number(n: i64) -> Result<ExactRational> {
    let n = usize::try_from(n).map_err(|_| invalid("Euler index must be nonnegative"))?;
    Ok(ExactRational(Rational::from(euler_integer(n))))
}

pub(crate) fn euler_integer(n: usize) -> Integer {
    let mut table = EULER.lock().unwrap_or_else(|e| e.into_inner());
    if table.is_empty() {
        table.push(Integer::from(1));
    }
    while table.len() <= n {
        let m = table.len();
        let mut sum = Integer::new();
        let mut binom = Integer::from(1);
        for k in 1..=m {
            binom *= m + 1 - k;
            binom /= k;
            if k % 2 == 0 {
                sum += &binom * &table[m - k];
            }
        }
        table.push(-sum);
    }
    table[n].clone()
}

fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

fn guard_bits(n: u32) -> u32 {
    16 + (32 - n.leading_zeros())
}

/// `zeta(2j)` from `B_{2j}/(2j)! = (-1)^{j+1} 2 zeta(2j)/(2 pi)^{2j}`, with
/// `zeta(0) = -1/2`.
pub fn zeta_even(two_k: u32, prec: u32) -> Result<RealValue> {
    if two_k % 2 != 0 {
        return Err(invalid(format!("zeta_even needs an even argument, got {two_k}")));
    }
    Ok(RealValue::rounded(zeta_even_value(two_k, prec)))
}

pub(crate) fn zeta_even_value(two_k: u32, prec: u32) -> Float {
    if two_k == 0 {
        return Float::with_val(prec, -0.5);
    }
    let wp = prec + guard_bits(two_k);
    let j = two_k / 2;
    let b = bernoulli_rational(two_k as usize);
    let mut two_pi = pi(wp);
    two_pi *= 2;
    let mut v = Float::with_val(wp, two_pi.pow(two_k));
    v *= &b;
    v /= factorial(two_k);
    v /= 2;
    if j % 2 == 0 {
        v = -v;
    }
    Float::with_val(prec, v)
}

/// `zeta(s)` for real `s > 1` by the Borwein acceleration of the
/// alternating series for `eta(s)`, divided by `1 - 2^{1-s}`.
///
/// The truncation error of `n` terms is at most
/// `3 / (3 + sqrt 8)^n / (1 - 2^{1-s})`.
pub fn zeta(s: f64, prec: u32) -> Result<RealValue> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(invalid(format!("zeta needs s > 1, got {s}")));
    }
    let blowup = 1.0 / (1.0 - 2f64.powf(1.0 - s));
    let extra = blowup.log2().max(0.0).ceil() as u32;
    let n = (((prec + 10 + extra) as f64) / (3.0 + 8f64.sqrt()).log2()).ceil() as u32 + 1;
    let wp = prec + 64 + extra;

    // d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    let mut d = Vec::with_capacity(n as usize + 1);
    let mut term = Float::with_val(wp, 1) / n;
    let mut acc = Float::new(wp);
    for i in 0..=n {
        acc += &term;
        d.push(Float::with_val(wp, &acc * n));
        if i < n {
            term *= 4 * (n + i) as u64;
            term *= (n - i) as u64;
            term /= ((2 * i + 1) * (2 * i + 2)) as u64;
        }
    }
    let dn = d[n as usize].clone();
    let s_f = Float::with_val(wp, s);
    let mut sum = Float::new(wp);
    for k in 0..n {
        let base = Float::with_val(wp, k + 1);
        let denom = Float::with_val(wp, base.pow(&s_f));
        let mut t = Float::with_val(wp, &d[k as usize] - &dn);
        t /= &denom;
        if k % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
    }
    let mut eta = -sum;
    eta /= &dn;
    let mut factor = Float::with_val(wp, 1);
    factor -= Float::with_val(wp, 2).pow(Float::with_val(wp, 1.0 - s));
    let zeta = Float::with_val(wp, &eta / &factor);

    let mut truncation = Float::with_val(prec, 3) / Float::with_val(prec, 3.0 + 8f64.sqrt()).pow(n);
    truncation *= blowup * 1.01;
    let mut rounding = Float::with_val(prec, 8 * (n as u64 + 2) * (n as u64 + 2));
    rounding *= blowup * 1.01;
    rounding >>= wp;

    let value = Float::with_val(prec, &zeta);
    let mut error_bound = ulp_bound(&value);
    error_bound += truncation;
    error_bound += rounding;
    Ok(RealValue { value, error_bound })
}

/// `eta(s) = (1 - 2^{1-s}) zeta(s)`.
pub fn eta(s: f64, prec: u32) -> Result<RealValue> {
    scaled_zeta(s, prec, 1.0 - s)
}

/// `eta_0(s) = (1 - 2^{-s}) zeta(s)`.
pub fn eta0(s: f64, prec: u32) -> Result<RealValue> {
    scaled_zeta(s, prec, -s)
}

fn scaled_zeta(s: f64, prec: u32, exponent: f64) -> Result<RealValue> {
    let wp = prec + 32;
    let z = zeta(s, wp)?;
    let mut factor = Float::with_val(wp, 1);
    factor -= Float::with_val(wp, 2).pow(Float::with_val(wp, exponent));
    let value = Float::with_val(prec, &z.value * &factor);
    let mut error_bound = Float::with_val(prec, &z.error_bound * &factor);
    error_bound += ulp_bound(&value);
    Ok(RealValue { value, error_bound })
}

/// `eta(2j)` through the even-argument zeta values; `eta(0) = 1/2`.
pub fn eta_even(two_k: u32, prec: u32) -> Result<RealValue> {
    if two_k % 2 != 0 {
        return Err(invalid(format!("eta_even needs an even argument, got {two_k}")));
    }
    Ok(RealValue::rounded(eta_even_value(two_k, prec)))
}

/// `eta_0(2j)` through the even-argument zeta values; `eta_0(0) = 0`.
pub fn eta0_even(two_k: u32, prec: u32) -> Result<RealValue> {
    if two_k % 2 != 0 {
        return Err(invalid(format!("eta0_even needs an even argument, got {two_k}")));
    }
    Ok(RealValue::rounded(eta0_even_value(two_k, prec)))
}

pub(crate) fn eta_even_value(two_k: u32, prec: u32) -> Float {
    let wp = prec + 16;
    let z = zeta_even_value(two_k, wp);
    let mut factor = Float::with_val(wp, 1);
    factor -= Float::with_val(wp, Float::i_exp(1, 1 - two_k as i32));
    Float::with_val(prec, z * factor)
}

pub(crate) fn eta0_even_value(two_k: u32, prec: u32) -> Float {
    let wp = prec + 16;
    let z = zeta_even_value(two_k, wp);
    let mut factor = Float::with_val(wp, 1);
    factor -= Float::with_val(wp, Float::i_exp(1, -(two_k as i32)));
    Float::with_val(prec, z * factor)
}

/// `L(2j+1, chi_4) = (-1)^j E_{2j} / (2 (2j)!) (pi/2)^{2j+1}`.
pub fn l_chi4(odd_s: u32, prec: u32) -> Result<RealValue> {
    if odd_s % 2 == 0 {
        return Err(invalid(format!("l_chi4 needs an odd argument, got {odd_s}")));
    }
    Ok(RealValue::rounded(l_chi4_value(odd_s, prec)))
}

pub(crate) fn l_chi4_value(odd_s: u32, prec: u32) -> Float {
    let two_j = odd_s - 1;
    let wp = prec + guard_bits(odd_s);
    let e = euler_integer(two_j as usize);
    let mut half_pi = pi(wp);
    half_pi /= 2;
    let mut v = Float::with_val(wp, half_pi.pow(odd_s));
    v *= &e;
    v /= factorial(two_j);
    v /= 2;
    if (two_j / 2) % 2 == 1 {
        v = -v;
    }
    Float::with_val(prec, v)
}
