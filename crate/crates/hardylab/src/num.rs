//! Outward-rounded interval arithmetic over MPFR floats, plus exact
//! rational helpers.
//!
//! Every infinite-series value in this crate is reported as an [`Enclosure`]
//! `[lo, hi]` whose endpoints are computed with directed rounding, so the
//! true value is certified to lie inside. Exact rationals (`Rat`) are used
//! wherever a computation stays in Q.

use std::cmp::Ordering;

use rug::float::Round;
use rug::ops::{
    AddAssignRound, DivAssignRound, MulAssignRound, NegAssign, Pow, PowAssignRound, SubAssignRound,
};
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

pub type Rat = Rational;

/// Smallest precision the float backend accepts (IEEE double mantissa).
pub const MIN_PREC: u32 = 53;
/// Default working precision in bits.
pub const DEFAULT_PREC: u32 = 128;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::from((n, d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from(n)
}

/// Parses "a/b", integers, and plain decimal strings (with optional
/// exponent) into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Input("empty numeric literal".into()));
    }
    if s.contains('/') {
        return s
            .parse::<Rat>()
            .map_err(|e| Error::Input(format!("bad rational {s:?}: {e}")));
    }
    // decimal form: [sign] digits [. digits] [e[sign]digits]
    let (mantissa, exp10) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..]
                .parse()
                .map_err(|e| Error::Input(format!("bad exponent in {s:?}: {e}")))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || digits == "-" || digits == "+" {
        return Err(Error::Input(format!("bad numeric literal {s:?}")));
    }
    let numer = digits
        .parse::<Integer>()
        .map_err(|e| Error::Input(format!("bad numeric literal {s:?}: {e}")))?;
    let shift = exp10 - frac_part.len() as i64;
    if shift.unsigned_abs() > 1_000_000 {
        return Err(Error::Input(format!("exponent out of range in {s:?}")));
    }
    let mut r = Rat::from(numer);
    let p = Rat::from(Integer::from(10).pow(shift.unsigned_abs() as u32));
    if shift >= 0 {
        r *= p;
    } else {
        r /= p;
    }
    Ok(r)
}

/// Exact conversion; every finite float is a rational.
pub fn float_to_rat(f: &Float) -> Result<Rat> {
    f.to_rational()
        .ok_or_else(|| Error::Input("non-finite value".into()))
}

pub fn rat_to_float(r: &Rat, prec: u32, round: Round) -> Float {
    Float::with_val_round(prec, r, round).0
}

/// Full-precision decimal rendering, locale-free.
pub fn dec(f: &Float) -> String {
    if f.is_zero() {
        return "0".into();
    }
    f.to_string_radix(10, None)
}

fn bin<F>(a: &Float, op: F, round: Round) -> Float
where
    F: FnOnce(&mut Float, Round),
{
    let mut x = a.clone();
    op(&mut x, round);
    x
}

/// A closed interval certified to contain the represented real value.
#[derive(Clone, Debug)]
pub struct Enclosure {
    lo: Float,
    hi: Float,
}

impl Enclosure {
    pub fn new(lo: Float, hi: Float) -> Self {
        debug_assert!(lo <= hi, "inverted enclosure: {lo} > {hi}");
        Enclosure { lo, hi }
    }

    pub fn point(f: Float) -> Self {
        let hi = f.clone();
        Enclosure { lo: f, hi }
    }

    pub fn zero(prec: u32) -> Self {
        Enclosure::point(Float::with_val(prec, 0))
    }

    pub fn one(prec: u32) -> Self {
        Enclosure::point(Float::with_val(prec, 1))
    }

    pub fn from_u64(n: u64, prec: u32) -> Self {
        Enclosure::point(Float::with_val(prec.max(64), n))
    }

    /// Tightest enclosure of an exact rational at the given precision.
    pub fn from_rat(r: &Rat, prec: u32) -> Self {
        Enclosure::new(rat_to_float(r, prec, Round::Down), rat_to_float(r, prec, Round::Up))
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    pub fn width(&self) -> Float {
        let mut w = self.hi.clone();
        w.sub_assign_round(&self.lo, Round::Up);
        w
    }

    pub fn rel_width(&self) -> f64 {
        let w = self.width().to_f64();
        let m = self.lo.clone().abs().to_f64().max(self.hi.clone().abs().to_f64());
        if m == 0.0 {
            w
        } else {
            w / m
        }
    }

    pub fn mid_f64(&self) -> f64 {
        0.5 * (self.lo.to_f64() + self.hi.to_f64())
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    /// True value certainly ≤ the other's true value.
    pub fn certainly_le(&self, other: &Enclosure) -> bool {
        self.hi <= other.lo
    }

    /// True value certainly > the other's true value.
    pub fn certainly_gt(&self, other: &Enclosure) -> bool {
        self.lo > other.hi
    }

    pub fn add(&self, o: &Enclosure) -> Enclosure {
        Enclosure::new(
            bin(&self.lo, |x, r| { x.add_assign_round(&o.lo, r); }, Round::Down),
            bin(&self.hi, |x, r| { x.add_assign_round(&o.hi, r); }, Round::Up),
        )
    }

    pub fn add_assign(&mut self, o: &Enclosure) {
        self.lo.add_assign_round(&o.lo, Round::Down);
        self.hi.add_assign_round(&o.hi, Round::Up);
    }

    pub fn sub(&self, o: &Enclosure) -> Enclosure {
        Enclosure::new(
            bin(&self.lo, |x, r| { x.sub_assign_round(&o.hi, r); }, Round::Down),
            bin(&self.hi, |x, r| { x.sub_assign_round(&o.lo, r); }, Round::Up),
        )
    }

    pub fn neg(&self) -> Enclosure {
        let mut lo = self.hi.clone();
        lo.neg_assign();
        let mut hi = self.lo.clone();
        hi.neg_assign();
        Enclosure::new(lo, hi)
    }

    pub fn abs(&self) -> Enclosure {
        if self.lo >= 0 {
            self.clone()
        } else if self.hi <= 0 {
            self.neg()
        } else {
            let mut l = self.lo.clone().abs();
            let h = self.hi.clone().abs();
            if h > l {
                l = h;
            }
            Enclosure::new(Float::with_val(self.prec(), 0), l)
        }
    }

    /// Enclosure of max(x, y) for x ∈ self, y ∈ other.
    pub fn max(&self, o: &Enclosure) -> Enclosure {
        Enclosure::new(
            if self.lo >= o.lo { self.lo.clone() } else { o.lo.clone() },
            if self.hi >= o.hi { self.hi.clone() } else { o.hi.clone() },
        )
    }

    pub fn min(&self, o: &Enclosure) -> Enclosure {
        Enclosure::new(
            if self.lo <= o.lo { self.lo.clone() } else { o.lo.clone() },
            if self.hi <= o.hi { self.hi.clone() } else { o.hi.clone() },
        )
    }

    pub fn mul(&self, o: &Enclosure) -> Enclosure {
        if self.lo >= 0 && o.lo >= 0 {
            return Enclosure::new(
                bin(&self.lo, |x, r| { x.mul_assign_round(&o.lo, r); }, Round::Down),
                bin(&self.hi, |x, r| { x.mul_assign_round(&o.hi, r); }, Round::Up),
            );
        }
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&o.lo, &o.hi] {
                let d = bin(a, |x, r| { x.mul_assign_round(b, r); }, Round::Down);
                let u = bin(a, |x, r| { x.mul_assign_round(b, r); }, Round::Up);
                lo = Some(match lo {
                    Some(c) if c <= d => c,
                    _ => d,
                });
                hi = Some(match hi {
                    Some(c) if c >= u => c,
                    _ => u,
                });
            }
        }
        Enclosure::new(lo.unwrap(), hi.unwrap())
    }

    /// Division; the denominator must not contain zero.
    pub fn div(&self, o: &Enclosure) -> Enclosure {
        assert!(!o.contains_zero(), "division by an interval containing zero");
        if self.lo >= 0 && o.lo > 0 {
            return Enclosure::new(
                bin(&self.lo, |x, r| { x.div_assign_round(&o.hi, r); }, Round::Down),
                bin(&self.hi, |x, r| { x.div_assign_round(&o.lo, r); }, Round::Up),
            );
        }
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&o.lo, &o.hi] {
                let d = bin(a, |x, r| { x.div_assign_round(b, r); }, Round::Down);
                let u = bin(a, |x, r| { x.div_assign_round(b, r); }, Round::Up);
                lo = Some(match lo {
                    Some(c) if c <= d => c,
                    _ => d,
                });
                hi = Some(match hi {
                    Some(c) if c >= u => c,
                    _ => u,
                });
            }
        }
        Enclosure::new(lo.unwrap(), hi.unwrap())
    }

    pub fn div_u64(&self, n: u64) -> Enclosure {
        self.div(&Enclosure::from_u64(n, self.prec()))
    }

    pub fn recip(&self) -> Enclosure {
        assert!(!self.contains_zero(), "reciprocal of an interval containing zero");
        Enclosure::new(
            bin(&self.hi, |x, r| { x.recip_round(r); }, Round::Down),
            bin(&self.lo, |x, r| { x.recip_round(r); }, Round::Up),
        )
    }

    pub fn sqrt(&self) -> Enclosure {
        debug_assert!(self.lo >= 0);
        Enclosure::new(
            bin(&self.lo, |x, r| { x.sqrt_round(r); }, Round::Down),
            bin(&self.hi, |x, r| { x.sqrt_round(r); }, Round::Up),
        )
    }

    /// x^e for a nonnegative base and an exact rational exponent.
    ///
    /// Monotone in the base, so only the endpoints are evaluated. Small
    /// exponent denominators go through sqrt/cbrt; the rest fall back to
    /// MPFR pow with the exponent rounded both ways.
    pub fn pow_rat(&self, e: &Rat) -> Enclosure {
        debug_assert!(self.lo >= 0, "pow_rat on a base containing negatives");
        let cmp0 = e.cmp0();
        if cmp0 == Ordering::Equal {
            return Enclosure::one(self.prec());
        }
        if cmp0 == Ordering::Less {
            let pos = self.pow_rat(&Rat::from(-e.clone()));
            return pos.recip();
        }
        Enclosure::new(
            pow_dir(&self.lo, e, Round::Down),
            pow_dir(&self.hi, e, Round::Up),
        )
    }

    pub fn pow_u32(&self, k: u32) -> Enclosure {
        debug_assert!(self.lo >= 0);
        if k == 0 {
            return Enclosure::one(self.prec());
        }
        Enclosure::new(
            bin(&self.lo, |x, r| { x.pow_assign_round(k, r); }, Round::Down),
            bin(&self.hi, |x, r| { x.pow_assign_round(k, r); }, Round::Up),
        )
    }

    /// Enclosure of the union (smallest interval containing both).
    pub fn hull(&self, o: &Enclosure) -> Enclosure {
        Enclosure::new(
            if self.lo <= o.lo { self.lo.clone() } else { o.lo.clone() },
            if self.hi >= o.hi { self.hi.clone() } else { o.hi.clone() },
        )
    }

    /// Whether self is contained in (is a refinement of) the other.
    pub fn subset_of(&self, o: &Enclosure) -> bool {
        self.lo >= o.lo && self.hi <= o.hi
    }
}

/// Directed x^e for a single nonnegative float endpoint.
fn pow_dir(x: &Float, e: &Rat, round: Round) -> Float {
    debug_assert!(e.cmp0() == Ordering::Greater);
    let num = e.numer();
    let den = e.denom();
    let prec = x.prec();
    if x.is_zero() {
        return Float::with_val(prec, 0);
    }
    if let (Some(num), Some(den)) = (num.to_i32(), den.to_u32()) {
        // Rounding down (up) at every stage keeps a lower (upper) bound:
        // each stage is monotone increasing on nonnegative inputs.
        let mut y = x.clone();
        match den {
            1 => {}
            2 => {
                y.sqrt_round(round);
            }
            4 => {
                y.sqrt_round(round);
                y.sqrt_round(round);
            }
            d if d <= 4096 => {
                y.root_round(d, round);
            }
            _ => {
                return pow_general(x, e, round);
            }
        }
        if num != 1 {
            y.pow_assign_round(num, round);
        }
        return y;
    }
    pow_general(x, e, round)
}

/// Corner evaluation of x^e via MPFR pow with the exponent itself enclosed,
/// valid whether x is above or below 1.
fn pow_general(x: &Float, e: &Rat, round: Round) -> Float {
    let prec = x.prec();
    let e_lo = rat_to_float(e, prec, Round::Down);
    let e_hi = rat_to_float(e, prec, Round::Up);
    let mut a = x.clone();
    a.pow_assign_round(&e_lo, round);
    let mut b = x.clone();
    b.pow_assign_round(&e_hi, round);
    match round {
        Round::Down => {
            if a <= b {
                a
            } else {
                b
            }
        }
        _ => {
            if a >= b {
                a
            } else {
                b
            }
        }
    }
}

/// Enclosure of Σ of enclosures.
pub fn sum_enclosures<'a, I: IntoIterator<Item = &'a Enclosure>>(items: I, prec: u32) -> Enclosure {
    let mut acc = Enclosure::zero(prec);
    for e in items {
        acc.add_assign(e);
    }
    acc
}
