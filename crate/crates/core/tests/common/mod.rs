//! Independent brute-force colorings, written from the visit lists alone.

#![allow(dead_code)]

use doodle_core::diagram::Sign;
use doodle_core::{FiniteDoodleSwitch, GaussCode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `(a, b, c, d)` per crossing: positive strand `a → d`, negative `c → b`.
pub fn corners(code: &GaussCode) -> Vec<(usize, usize, usize, usize)> {
    let mut out = vec![(0, 0, 0, 0); code.crossing_count()];
    let mut base = 0;
    for comp in code.components() {
        let k = comp.len();
        for (i, v) in comp.iter().enumerate() {
            let inc = base + (i + k - 1) % k;
            let outg = base + i;
            let e = &mut out[v.crossing];
            match v.sign {
                Sign::Pos => {
                    e.0 = inc;
                    e.3 = outg;
                }
                Sign::Neg => {
                    e.2 = inc;
                    e.1 = outg;
                }
            }
        }
        base += k.max(1);
    }
    out
}

fn arcs(code: &GaussCode) -> usize {
    code.components().iter().map(|c| c.len().max(1)).sum()
}

fn odometer(values: &mut [usize], n: usize) -> bool {
    for v in values.iter_mut() {
        if *v < n {
            *v += 1;
            return true;
        }
        *v = 1;
    }
    false
}

/// Semiarc colorings with `c = b·a` and `d = a·b` at every crossing.
pub fn col_oracle(code: &GaussCode, sw: &FiniteDoodleSwitch) -> u128 {
    let ks = corners(code);
    let n = sw.order();
    let mut x = vec![1; arcs(code)];
    let mut count = 0;
    loop {
        if ks
            .iter()
            .all(|&(a, b, c, d)| x[c] == sw.mul(x[b], x[a]) && x[d] == sw.mul(x[a], x[b]))
        {
            count += 1;
        }
        if !odometer(&mut x, n) {
            return count;
        }
    }
}

/// Doubled colorings: choose the lower colors freely, then every upper color
/// is forced by two relations which must agree.
pub fn dcol_oracle(code: &GaussCode, sw: &FiniteDoodleSwitch) -> u128 {
    let ks = corners(code);
    let n = sw.order();
    let m = arcs(code);
    let mut lo = vec![1; m];
    let mut count: u128 = 0;
    loop {
        let mut up = vec![None; m];
        let mut ok = true;
        for &(a, b, c, d) in &ks {
            for (arc, val) in [
                (a, sw.mul(lo[d], lo[c])),
                (b, sw.mul(lo[c], lo[d])),
                (c, sw.mul(lo[b], lo[a])),
                (d, sw.mul(lo[a], lo[b])),
            ] {
                match up[arc] {
                    None => up[arc] = Some(val),
                    Some(u) if u == val => {}
                    Some(_) => ok = false,
                }
            }
        }
        if ok {
            let free = up.iter().filter(|u| u.is_none()).count() as u32;
            count += (n as u128).pow(free);
        }
        if !odometer(&mut lo, n) {
            return count;
        }
    }
}

pub fn random_code(seed: u64, max_crossings: usize, max_components: usize) -> GaussCode {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(0..=max_crossings);
    let c = rng.gen_range(1..=max_components);
    GaussCode::random(&mut rng, k, c)
}
