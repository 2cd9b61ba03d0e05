//! Numeric embodiment of the color-count recurrences: tabulation of the
//! upper-bound functions f_d(n), fitting of the quasi-polynomial exponent
//! beta_d, evaluation of the main per-step recurrence, a reverse-Bernoulli
//! grid check, and the headline chromatic bound.
//!
//! Values are exact big integers up to a bit-size threshold and switch to
//! log-domain f64 with upward-directed rounding above it, so every reported
//! number is a true upper bound of the exactly-defined quantity.

use crate::error::{Error, Result};
use num::bigint::BigUint;
use num::rational::Ratio;
use num::{BigInt, One, ToPrimitive, Zero};
use std::collections::HashMap;

/// Bit size above which exact integers switch to log-domain.
pub const EXACT_BITS: u64 = 256;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(BigUint),
    /// Upper bound of log2 of the value, rounded upward at every operation.
    Log2(f64),
}

fn next_up(x: f64) -> f64 {
    // positive finite values only
    if x == 0.0 {
        return f64::from_bits(1);
    }
    if x > 0.0 {
        f64::from_bits(x.to_bits() + 1)
    } else {
        f64::from_bits(x.to_bits() - 1)
    }
}

fn next_down(x: f64) -> f64 {
    if x > 0.0 {
        f64::from_bits(x.to_bits() - 1)
    } else if x < 0.0 {
        f64::from_bits(x.to_bits() + 1)
    } else {
        -f64::from_bits(1)
    }
}

/// Upper bound of log2 of a positive big integer.
pub fn log2_upper_biguint(b: &BigUint) -> f64 {
    let bits = b.bits();
    if bits <= 53 {
        return next_up(b.to_u64().unwrap().to_f64().unwrap().log2());
    }
    let shift = bits - 53;
    let top: BigUint = (b >> shift) + 1u32; // round mantissa up
    let approx = top.to_u64().unwrap() as f64;
    next_up(next_up(approx.log2()) + shift as f64)
}

fn log2_add_upper(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    next_up(hi + next_up((1.0 + next_up((lo - hi).exp2())).log2()))
}

impl Value {
    pub fn from_u128(v: u128) -> Value {
        Value::Exact(BigUint::from(v))
    }

    pub fn log2_upper(&self) -> f64 {
        match self {
            Value::Exact(b) => {
                if b.is_zero() {
                    f64::NEG_INFINITY
                } else {
                    log2_upper_biguint(b)
                }
            }
            Value::Log2(x) => *x,
        }
    }

    fn normalized(self) -> Value {
        match self {
            Value::Exact(b) if b.bits() > EXACT_BITS => Value::Log2(log2_upper_biguint(&b)),
            v => v,
        }
    }

    pub fn add(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => Value::Exact(a + b).normalized(),
            _ => Value::Log2(log2_add_upper(self.log2_upper(), other.log2_upper())),
        }
    }

    pub fn mul(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => Value::Exact(a * b).normalized(),
            _ => Value::Log2(next_up(self.log2_upper() + other.log2_upper())),
        }
    }

    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            Value::Exact(b) => Some(b),
            Value::Log2(_) => None,
        }
    }
}

/// Two independently-measured multiplicative constants of the main
/// recurrence: one for the blob-class split, one inside the bucket term.
#[derive(Debug, Clone, Copy)]
pub struct StepConstants {
    pub c_split: u64,
    pub c_bucket: u64,
}

pub struct RecurrenceTable {
    pub d_max: usize,
    pub n_max: u64,
    /// alpha[d] for 3 <= d <= d_max; entries below index 3 are unused.
    pub alphas: Vec<u64>,
    /// rows[d - 3][n - 1] = f_d(n) for 1 <= n <= n_max.
    rows: Vec<Vec<Value>>,
    ub_memo: std::cell::RefCell<HashMap<(usize, u32), f64>>,
    vb_memo: std::cell::RefCell<HashMap<(usize, u32), f64>>,
}

fn ceil_log2_u128(m: u128) -> u32 {
    debug_assert!(m >= 1);
    128 - (m - 1).leading_zeros()
}

fn floor_log2_u64(n: u64) -> u32 {
    63 - n.leading_zeros()
}

/// f_d(n) per the tabulation rules, given a lookup for all strictly smaller
/// required arguments (same level, smaller n; or level d-1, any argument).
fn compute_entry(
    d: usize,
    n: u64,
    alpha: u64,
    lookup: &mut dyn FnMut(usize, u128) -> Value,
) -> Value {
    if d == 2 || n <= 7 {
        return Value::from_u128(n as u128);
    }
    let t1 = lookup(d, ((7 * n).div_ceil(8)) as u128);
    let ell = floor_log2_u64(n) - 3; // n >= 8 here, so ell >= 0
    let mut sum = Value::from_u128(0);
    for u in 0..=ell {
        let a = lookup(d, (1u128) << (u + 1));
        let b = lookup(d, (n.div_ceil(1 << (u + 1)) + 1) as u128);
        sum = sum.add(&a.mul(&b));
    }
    let cross = lookup(d - 1, 2 * (n as u128).pow(d as u32 - 1));
    let inner = t1.add(&cross.mul(&cross).mul(&sum));
    Value::from_u128(alpha as u128).mul(&inner)
}

impl RecurrenceTable {
    /// Bottom-up tabulation of f_d(n) for 3 <= d <= d_max, 1 <= n <= n_max.
    pub fn build(d_max: usize, n_max: u64, alphas: Vec<u64>) -> Result<RecurrenceTable> {
        if d_max < 2 || n_max < 8 {
            return Err(Error::input("build_table requires d_max >= 2, n_max >= 8"));
        }
        for d in 3..=d_max {
            match alphas.get(d) {
                Some(&a) if a >= 1 => {}
                _ => return Err(Error::input("alphas must cover 3..=d_max with values >= 1")),
            }
        }
        let mut table = RecurrenceTable {
            d_max,
            n_max,
            alphas,
            rows: Vec::new(),
            ub_memo: Default::default(),
            vb_memo: Default::default(),
        };
        for d in 3..=d_max {
            let alpha = table.alphas[d];
            let mut row: Vec<Value> = Vec::with_capacity(n_max as usize);
            for n in 1..=n_max {
                let v = {
                    let row_ref = &row;
                    let table_ref = &table;
                    compute_entry(d, n, alpha, &mut |dd, m| {
                        if dd == d {
                            debug_assert!(m < n as u128);
                            row_ref[(m - 1) as usize].clone()
                        } else {
                            table_ref.eval_f(dd, m)
                        }
                    })
                };
                row.push(v);
            }
            table.rows.push(row);
        }
        Ok(table)
    }

    pub fn uniform_alphas(d_max: usize, a: u64) -> Vec<u64> {
        vec![a; d_max + 1]
    }

    /// Table value f_d(n) for in-range arguments.
    pub fn get(&self, d: usize, n: u64) -> Value {
        if d == 2 {
            return Value::from_u128(n as u128);
        }
        self.rows[d - 3][(n - 1) as usize].clone()
    }

    /// f_d at an arbitrary argument: exact identity for d = 2, table value in
    /// range, and a certified log-domain upper bound beyond the table (the
    /// argument is rounded up to a power of two and the self-referential
    /// prefix term of the recurrence is unrolled analytically).
    pub fn eval_f(&self, d: usize, m: u128) -> Value {
        debug_assert!(m >= 1);
        if d == 2 {
            return Value::from_u128(m).normalized();
        }
        if m <= self.n_max as u128 {
            return self.get(d, m as u64);
        }
        Value::Log2(self.ub(d, ceil_log2_u128(m)))
    }

    /// Upper bound of log2 f_d(m) for all m <= 2^j.
    fn ub(&self, d: usize, j: u32) -> f64 {
        if d == 2 {
            return j as f64;
        }
        if j < 64 && (1u64 << j) <= self.n_max {
            // table rows are nondecreasing in n, so the supremum is at 2^j
            return self.get(d, 1u64 << j).log2_upper();
        }
        if let Some(&v) = self.ub_memo.borrow().get(&(d, j)) {
            return v;
        }
        let alpha = self.alphas[d] as f64;
        // f(m) <= alpha * f(ceil(7m/8)) + alpha * S(m): unroll the prefix term
        // L times until the argument drops below 8, bounding every S by its
        // value at the largest argument. f(m) <= alpha^L * (7 + L * S_max).
        let l = ((j as f64 - 7f64.log2()) / (8f64 / 7.0).log2()).ceil().max(1.0) + 1.0;
        let cross = self.ub(d - 1, (d as u32 - 1) * j + 1);
        let mut sum_log = f64::NEG_INFINITY;
        for u in 0..=j.saturating_sub(3) {
            let term = next_up(self.ub(d, u + 1) + self.vb(d, j - u - 1));
            sum_log = if sum_log == f64::NEG_INFINITY {
                term
            } else {
                log2_add_upper(sum_log, term)
            };
        }
        let smax = next_up(2.0 * cross + sum_log);
        let v = next_up(
            l * next_up(alpha.log2().max(0.0))
                + log2_add_upper(7f64.log2(), next_up(l.log2() + smax)),
        );
        self.ub_memo.borrow_mut().insert((d, j), v);
        v
    }

    /// Upper bound of log2 f_d(q + 1) for all q <= 2^i.
    fn vb(&self, d: usize, i: u32) -> f64 {
        if d == 2 {
            // f_2(q + 1) <= 2^i + 1; for large i the +1 is below f64 resolution
            return if i >= 30 {
                next_up(i as f64 + 1e-9)
            } else {
                next_up(((1u64 << i) as f64 + 1.0).log2())
            };
        }
        if i < 63 && (1u64 << i) + 1 <= self.n_max {
            return self.get(d, (1u64 << i) + 1).log2_upper();
        }
        if let Some(&v) = self.vb_memo.borrow().get(&(d, i)) {
            return v;
        }
        let alpha = (self.alphas[d] as f64).log2().max(0.0);
        // one recurrence step: the prefix argument ceil(7(2^i+1)/8) <= 2^i
        // drops into ub coverage; children ceil((2^i+1)/2^(u+1)) + 1 <= 2^(i-u).
        let cross = self.ub(d - 1, (d as u32 - 1) * (i + 1) + 1);
        let mut sum_log = f64::NEG_INFINITY;
        for u in 0..=i.saturating_sub(3) {
            let term = next_up(self.ub(d, u + 1) + self.ub(d, i - u));
            sum_log = if sum_log == f64::NEG_INFINITY {
                term
            } else {
                log2_add_upper(sum_log, term)
            };
        }
        let s = if sum_log == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            next_up(2.0 * cross + sum_log)
        };
        let v = next_up(alpha + log2_add_upper(self.ub(d, i), s));
        self.vb_memo.borrow_mut().insert((d, i), v);
        v
    }

    /// Least integer beta with log2 f_d(n) <= beta * (log2 n)^(d-1) for all
    /// 2 <= n <= n_max.
    pub fn fit_beta(&self, d: usize) -> u64 {
        if d == 2 {
            return 1; // f_2(n) = n exactly
        }
        let mut max_ratio = 0.0f64;
        for n in 2..=self.n_max {
            let num = self.get(d, n).log2_upper();
            let den = next_down(next_down((n as f64).log2()).powi(d as i32 - 1));
            max_ratio = max_ratio.max(num / den);
        }
        max_ratio.ceil() as u64
    }
}

/// Top-down (memoized) evaluation of the same tabulation; used to check that
/// two independent evaluation orders agree bit-for-bit.
pub fn eval_topdown(d_max: usize, n_max: u64, alphas: &[u64], d: usize, n: u64) -> Value {
    fn go(
        table: &RecurrenceTable,
        memo: &mut HashMap<(usize, u64), Value>,
        d: usize,
        m: u128,
    ) -> Value {
        if d == 2 {
            return Value::from_u128(m).normalized();
        }
        if m > table.n_max as u128 {
            return table.eval_f(d, m);
        }
        let n = m as u64;
        if let Some(v) = memo.get(&(d, n)) {
            return v.clone();
        }
        let alpha = table.alphas[d];
        let v = compute_entry(d, n, alpha, &mut |dd, mm| go(table, memo, dd, mm));
        memo.insert((d, n), v.clone());
        v
    }
    // reuse the bounded-out-of-table machinery but not the bottom-up rows:
    // build only rows strictly below d bottom-up (they are needed for the
    // out-of-table bounds), then recurse top-down at level d.
    let table = RecurrenceTable::build(d_max.max(3), n_max, {
        let mut a = alphas.to_vec();
        a.resize(d_max.max(3) + 1, *alphas.last().unwrap_or(&1));
        a
    })
    .expect("table parameters validated by caller");
    let mut memo = HashMap::new();
    go(&table, &mut memo, d, n as u128)
}

/// Right-hand side of the per-step recurrence
/// f_d(w) <= f_d(w-k) + C1 [ f_d(w-k)
///   + 8 C2 f_{d-1}(2 w^{d-1})^2 * sum_{u=0}^{floor(log2 k)} f_d(2^{u+1}) f_d(2k/2^u + 1) ].
pub fn eval_main_rhs(
    table: &RecurrenceTable,
    d: usize,
    omega: u64,
    k: u64,
    consts: StepConstants,
) -> Result<Value> {
    if d < 3 || omega < 5 || k < 1 || 4 * k >= omega {
        return Err(Error::input(
            "eval_main_rhs requires d >= 3, omega >= 5, 1 <= k < omega/4",
        ));
    }
    let a = table.eval_f(d, (omega - k) as u128);
    let mut sum = Value::from_u128(0);
    for u in 0..=floor_log2_u64(k) {
        let x = table.eval_f(d, 1u128 << (u + 1));
        // f_d extends to reals by ceiling: argument is 2k/2^u + 1
        let arg = (2 * k).div_ceil(1 << u) + 1;
        let y = table.eval_f(d, arg as u128);
        sum = sum.add(&x.mul(&y));
    }
    let cross = table.eval_f(d - 1, 2 * (omega as u128).pow(d as u32 - 1));
    let bucket = Value::from_u128(8 * consts.c_bucket as u128)
        .mul(&cross)
        .mul(&cross)
        .mul(&sum);
    let inner = a.add(&bucket);
    Ok(a.add(&Value::from_u128(consts.c_split as u128).mul(&inner)))
}

/// Exact-rational grid check of (1 - e)^(d-1) <= 1 - (d-1)/2^(d-2) * e for
/// e in [0, 1/2] at the given dyadic step.
pub fn rev_bernoulli_check(d: usize, grid_log2_step: u32) -> bool {
    if d < 2 {
        return false;
    }
    let step = BigInt::from(1u32) << grid_log2_step;
    let coeff = Ratio::new(BigInt::from(d as u64 - 1), BigInt::one() << (d as u32 - 2));
    let half_points = BigInt::from(1u32) << (grid_log2_step - 1);
    let mut i = BigInt::zero();
    while i <= half_points {
        let eps = Ratio::new(i.clone(), step.clone());
        let lhs = (Ratio::from(BigInt::one()) - eps.clone()).pow(d as i32 - 1);
        let rhs = Ratio::from(BigInt::one()) - coeff.clone() * eps;
        if lhs > rhs {
            return false;
        }
        i += 1;
    }
    true
}

/// The headline chromatic bound 2^(gamma * (log2 omega)^(4t+3)), as a
/// log-domain value.
pub fn theorem_bound(t: usize, omega: u64, gamma: f64) -> Result<Value> {
    if omega < 2 || gamma <= 0.0 {
        return Err(Error::input("theorem_bound requires omega >= 2, gamma > 0"));
    }
    let exponent = 4 * t + 3;
    Ok(Value::Log2(gamma * (omega as f64).log2().powi(exponent as i32)))
}
