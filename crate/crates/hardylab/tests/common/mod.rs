//! Independent brute-force oracles shared by the integration tests.
//!
//! These are written directly from the functional definitions with O(N²)
//! exhaustive sup computations and no shared code with the library scans,
//! so agreement is meaningful evidence.

#![allow(dead_code)]

use hardylab::num::{rat_int, Rat};
use hardylab::seqcore::{prefix_sums, Sequence};
use rug::ops::Pow;

/// Per-n terms of the sup/min functional with the linear weight, integer p:
/// term(n) = (sup_{m≥1} min(1/n, 1/m)·|S(m)|)^p, computed by trying every m.
/// For m > N the value is dominated by m = N, so m ranges over 1..=N.
pub fn brute_f1_terms(seq: &Sequence, p: u32) -> Vec<Rat> {
    let sums = prefix_sums(seq);
    let n_sup = sums.len();
    (1..=n_sup)
        .map(|n| {
            let mut best = Rat::new();
            for m in 1..=n_sup {
                let s_abs = Rat::from(sums.at(m).abs());
                let denom = rat_int(n.max(m) as i64);
                let v = Rat::from(s_abs / denom);
                if v > best {
                    best = v;
                }
            }
            best.pow(p)
        })
        .collect()
}

/// Per-n terms of the max/sup functional, integer p, shift l:
/// term(n) = max( sup_{m≤n} |ψ(m)|^p / n^{l+p}, sup_{m≥n} |ψ(m)|^p / m^{l+p} ),
/// computed by trying every m. Terms with m > N vanish.
pub fn brute_f2_terms(seq: &Sequence, p: u32, l_shift: u32) -> Vec<Rat> {
    let n_sup = seq.support();
    (1..=n_sup)
        .map(|n| {
            let mut best = Rat::new();
            for m in 1..=n_sup {
                let a_p = Rat::from(seq.at(m).abs()).pow(p);
                if m <= n {
                    let v = Rat::from(&a_p / Rat::from(rug::Integer::from(n).pow(p + l_shift)));
                    if v > best {
                        best = v;
                    }
                }
                if m >= n {
                    let v = Rat::from(&a_p / Rat::from(rug::Integer::from(m).pow(p + l_shift)));
                    if v > best {
                        best = v;
                    }
                }
            }
            best
        })
        .collect()
}

/// Exact rational sandwich for ζ(s, a) with integer s ≥ 2: the partial sum
/// over `terms` entries plus the plain integral bracket
/// ∫_{c}^∞ x^{−s} dx ≤ tail ≤ ∫_{c−1}^∞ x^{−s} dx, c = a + terms.
pub fn zeta_oracle_int(s: u32, a: u64, terms: u64) -> (Rat, Rat) {
    assert!(s >= 2 && a >= 1 && terms >= 1);
    let mut partial = Rat::new();
    for k in a..a + terms {
        partial += Rat::from(rug::Integer::from(k).pow(s)).recip();
    }
    let tail_at = |c: u64| -> Rat {
        // ∫_c^∞ x^{−s} dx = c^{1−s}/(s−1)
        let denom = Rat::from(rug::Integer::from(c).pow(s - 1)) * rat_int(s as i64 - 1);
        denom.recip()
    };
    let lo = Rat::from(&partial + tail_at(a + terms));
    let hi = Rat::from(&partial + tail_at(a + terms - 1));
    (lo, hi)
}

/// All n_entries^len sequences with entries drawn from `alphabet`.
pub fn exhaustive_sequences(alphabet: &[i64], len: usize) -> Vec<Sequence> {
    let mut out = Vec::new();
    let total = alphabet.len().pow(len as u32);
    for mut code in 0..total {
        let mut vals = Vec::with_capacity(len);
        for _ in 0..len {
            vals.push(rat_int(alphabet[code % alphabet.len()]));
            code /= alphabet.len();
        }
        out.push(Sequence::from_values(vals));
    }
    out
}
