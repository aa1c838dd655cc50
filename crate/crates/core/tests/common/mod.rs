//! Test-only reference implementation.
//!
//! A sparse simulator keyed by basis tuples
//! `(pol_a, spat_a, pol_b, spat_b, pol_c, spat_c, nv1, nv2, nv3, nv4)`, with
//! its own hand-written copy of the circuit, and closed-form checkpoint states
//! written out term by term. Nothing here calls into the library's state or
//! gate code.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2 as H;

use num_complex::Complex64 as C;

pub type Key = [u8; 10];
pub type Sparse = BTreeMap<Key, C>;

pub const DIMS: [u8; 10] = [2, 2, 2, 2, 2, 5, 2, 2, 2, 2];

fn c(x: f64) -> C {
    C::new(x, 0.0)
}

fn add(s: &mut Sparse, k: Key, z: C) {
    *s.entry(k).or_insert(c(0.0)) += z;
}

#[derive(Clone, Copy, Debug)]
pub enum Port {
    In,
    Flip,
    Pass,
}

#[derive(Clone, Debug)]
pub enum Op {
    /// 22.5 degree plate on photon `p`, listed modes (empty = all).
    Hp(usize, Vec<u8>),
    Bs(usize, u8, u8),
    Pbs(usize, u8, u8),
    Cav {
        p: usize,
        nv: usize,
        modes: Vec<u8>,
        r: Port,
        l: Port,
    },
    Hnv(usize),
}

fn on(modes: &[u8], m: u8) -> bool {
    modes.is_empty() || modes.contains(&m)
}

/// Reflection amplitude seen by polarization `pol` (0 = R) and spin `s` (0 = +).
fn reflect(pol: u8, s: u8, r: C, r0: C) -> C {
    if pol == s {
        r
    } else {
        r0
    }
}

fn cavity_factor(pol: u8, s: u8, rp: Port, lp: Port, r: C, r0: C) -> Option<C> {
    let port = if pol == 0 { rp } else { lp };
    match port {
        Port::Pass => None,
        Port::In => Some(reflect(pol, s, r, r0)),
        Port::Flip => Some(reflect(1 - pol, s, r, r0)),
    }
}

pub fn apply(s: &Sparse, op: &Op, r: C, r0: C) -> Sparse {
    let mut out = Sparse::new();
    for (k, z) in s {
        let z = *z;
        match op {
            Op::Hp(p, modes) => {
                let (pa, sa) = (2 * p, 2 * p + 1);
                if !on(modes, k[sa]) {
                    add(&mut out, *k, z);
                    continue;
                }
                let mut kr = *k;
                kr[pa] = 0;
                let mut kl = *k;
                kl[pa] = 1;
                let sign = if k[pa] == 0 { 1.0 } else { -1.0 };
                add(&mut out, kr, z * H);
                add(&mut out, kl, z * H * sign);
            }
            Op::Bs(p, m1, m2) => {
                let sa = 2 * p + 1;
                if k[sa] != *m1 && k[sa] != *m2 {
                    add(&mut out, *k, z);
                    continue;
                }
                let mut k1 = *k;
                k1[sa] = *m1;
                let mut k2 = *k;
                k2[sa] = *m2;
                let sign = if k[sa] == *m1 { 1.0 } else { -1.0 };
                add(&mut out, k1, z * H);
                add(&mut out, k2, z * H * sign);
            }
            Op::Pbs(p, m1, m2) => {
                let (pa, sa) = (2 * p, 2 * p + 1);
                let mut k2 = *k;
                if k[pa] == 1 && k[sa] == *m1 {
                    k2[sa] = *m2;
                } else if k[pa] == 1 && k[sa] == *m2 {
                    k2[sa] = *m1;
                }
                add(&mut out, k2, z);
            }
            Op::Cav {
                p,
                nv,
                modes,
                r: rp,
                l: lp,
            } => {
                let (pa, sa) = (2 * p, 2 * p + 1);
                let f = if on(modes, k[sa]) {
                    cavity_factor(k[pa], k[6 + nv], *rp, *lp, r, r0).unwrap_or(c(1.0))
                } else {
                    c(1.0)
                };
                add(&mut out, *k, z * f);
            }
            Op::Hnv(nv) => {
                let i = 6 + nv;
                let mut kp = *k;
                kp[i] = 0;
                let mut km = *k;
                km[i] = 1;
                let sign = if k[i] == 0 { 1.0 } else { -1.0 };
                add(&mut out, kp, z * H);
                add(&mut out, km, z * H * sign);
            }
        }
    }
    out
}

/// The eight steps of the circuit, written independently of the library.
pub fn circuit() -> Vec<Vec<Op>> {
    use Op::*;
    use Port::*;
    let (a, b, cc) = (0, 1, 2);
    let cav = |p, nv, modes: &[u8], r, l| Cav {
        p,
        nv,
        modes: modes.to_vec(),
        r,
        l,
    };
    let side = [3u8, 4];
    vec![
        vec![cav(b, 0, &[], In, Pass), Hnv(0)],
        vec![Bs(cc, 1, 2), cav(cc, 0, &[1], In, Flip), Bs(cc, 1, 2)],
        vec![cav(a, 1, &[], In, Pass), Hnv(1)],
        vec![
            cav(cc, 1, &[1], In, Flip),
            Bs(cc, 1, 2),
            cav(cc, 0, &[1], In, Flip),
            Bs(cc, 1, 2),
        ],
        vec![cav(b, 2, &[1], In, Flip), Hnv(2)],
        vec![
            Pbs(cc, 0, 3),
            Pbs(cc, 1, 4),
            Hp(cc, side.to_vec()),
            cav(cc, 2, &side, Pass, In),
            Hp(cc, side.to_vec()),
        ],
        vec![cav(a, 3, &[1], In, Flip), Hnv(3)],
        vec![
            cav(cc, 3, &side, Pass, In),
            Hp(cc, side.to_vec()),
            cav(cc, 2, &side, Pass, In),
            Hp(cc, side.to_vec()),
            Pbs(cc, 0, 3),
            Pbs(cc, 1, 4),
        ],
    ]
}

/// Coefficient pairs in the order alpha, sigma, beta, zeta, delta, xi
/// (pol_a, spat_a, pol_b, spat_b, pol_c, spat_c).
pub type Coeffs = [[C; 2]; 6];

pub fn coeffs_from_angles(a: [f64; 6]) -> Coeffs {
    // angle order alpha, beta, delta, sigma, zeta, xi
    let t = |x: f64| [c(x.cos()), c(x.sin())];
    [t(a[0]), t(a[3]), t(a[1]), t(a[4]), t(a[2]), t(a[5])]
}

pub fn basis_coeffs(k: usize) -> Coeffs {
    std::array::from_fn(|i| {
        if (k >> (5 - i)) & 1 == 0 {
            [c(1.0), c(0.0)]
        } else {
            [c(0.0), c(1.0)]
        }
    })
}

/// NV1, NV3 in `(|+> + |->)/sqrt2`; NV2, NV4 in `(|+> - |->)/sqrt2`.
pub fn spin_amp(nv: usize, s: u8) -> f64 {
    if nv % 2 == 1 && s == 1 {
        -H
    } else {
        H
    }
}

pub fn input(co: &Coeffs) -> Sparse {
    let mut s = Sparse::new();
    for idx in 0..1024usize {
        let bits: Vec<u8> = (0..10).map(|i| ((idx >> (9 - i)) & 1) as u8).collect();
        let mut z = c(1.0);
        for i in 0..6 {
            z *= co[i][bits[i] as usize];
        }
        for nv in 0..4 {
            z *= spin_amp(nv, bits[6 + nv]);
        }
        if z.norm() > 0.0 {
            s.insert(bits.try_into().unwrap(), z);
        }
    }
    s
}

/// States after each of the eight steps.
pub fn run_steps(s: &Sparse, r: C, r0: C) -> Vec<Sparse> {
    let mut cur = s.clone();
    let mut out = Vec::new();
    for step in circuit() {
        for op in &step {
            cur = apply(&cur, op, r, r0);
        }
        out.push(cur.clone());
    }
    out
}

pub fn run_all(s: &Sparse, r: C, r0: C) -> Sparse {
    run_steps(s, r, r0).pop().unwrap()
}

pub fn norm_sqr(s: &Sparse) -> f64 {
    s.values().map(|z| z.norm_sqr()).sum()
}

pub fn inner(a: &Sparse, b: &Sparse) -> C {
    a.iter()
        .filter_map(|(k, x)| b.get(k).map(|y| x.conj() * y))
        .sum()
}

/// Keep only amplitudes with every photon in its first two modes.
pub fn outputs_only(s: &Sparse) -> Sparse {
    s.iter()
        .filter(|(k, _)| k[1] < 2 && k[3] < 2 && k[5] < 2)
        .map(|(k, z)| (*k, *z))
        .collect()
}

pub fn is_zero_outside(s: &Sparse, allowed: impl Fn(&Key) -> bool, tol: f64) -> bool {
    s.iter().all(|(k, z)| allowed(k) || z.norm() <= tol)
}

/// Contract the spins with `<o'|` (o = 0 for +', 1 for -') and apply the
/// feed-forward table. Returns photonic amplitudes keyed by the first six digits.
pub fn readout(s: &Sparse, o: [u8; 4]) -> BTreeMap<[u8; 6], C> {
    let mut out = BTreeMap::new();
    for (k, z) in s {
        let mut w = c(1.0);
        for nv in 0..4 {
            let v = if o[nv] == 1 && k[6 + nv] == 1 { -H } else { H };
            w *= v;
        }
        let mut amp = z * w;
        if o[3] == 1 && k[1] == 0 {
            amp = -amp;
        }
        if o[2] == 1 && k[3] == 1 {
            amp = -amp;
        }
        if o[1] == 1 && k[0] == 1 {
            amp = -amp;
        }
        if o[0] == 1 && k[2] == 0 {
            amp = -amp;
        }
        let pk: [u8; 6] = k[..6].try_into().unwrap();
        *out.entry(pk).or_insert(c(0.0)) += amp;
    }
    out
}

/// Direct truth table: the sign of each photonic basis state.
pub fn truth_sign(k: usize) -> f64 {
    let b: Vec<usize> = (0..6).map(|i| (k >> (5 - i)) & 1).collect();
    let first = b[0] & b[2] & b[5];
    let second = b[1] & b[3] & b[4];
    if first ^ second == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Quantum-trajectory loss branches: returns `(lost mask, final state)` for
/// every branch. A photon lost at a cavity skips all later optics.
pub fn loss_branches(s: &Sparse, r: C, r0: C) -> Vec<([bool; 3], Sparse)> {
    let ops: Vec<Op> = circuit().into_iter().flatten().collect();
    let mut out = Vec::new();
    fn go(
        ops: &[Op],
        start: usize,
        lost: [bool; 3],
        mut s: Sparse,
        r: C,
        r0: C,
        out: &mut Vec<([bool; 3], Sparse)>,
    ) {
        for (i, op) in ops.iter().enumerate().skip(start) {
            let p = match op {
                Op::Hp(p, _) | Op::Bs(p, _, _) | Op::Pbs(p, _, _) => Some(*p),
                Op::Cav { p, .. } => Some(*p),
                Op::Hnv(_) => None,
            };
            if p.is_some_and(|p| lost[p]) {
                continue;
            }
            if let Op::Cav {
                p,
                nv,
                modes,
                r: rp,
                l: lp,
            } = op
            {
                let (pa, sa) = (2 * p, 2 * p + 1);
                let mut kept = Sparse::new();
                let mut leaked = Sparse::new();
                for (k, z) in &s {
                    match on(modes, k[sa])
                        .then(|| cavity_factor(k[pa], k[6 + nv], *rp, *lp, r, r0))
                        .flatten()
                    {
                        Some(f) => {
                            kept.insert(*k, z * f);
                            let leak = (1.0 - f.norm_sqr()).max(0.0).sqrt();
                            if leak > 0.0 {
                                leaked.insert(*k, z * leak);
                            }
                        }
                        None => {
                            kept.insert(*k, *z);
                        }
                    }
                }
                if !leaked.is_empty() {
                    let mut l2 = lost;
                    l2[*p] = true;
                    go(ops, i + 1, l2, leaked, r, r0, out);
                }
                s = kept;
            } else {
                s = apply(&s, op, r, r0);
            }
        }
        out.push((lost, s));
    }
    go(&ops, 0, [false; 3], s.clone(), r, r0, &mut out);
    out
}

pub fn fraction_out(branches: &[([bool; 3], Sparse)]) -> f64 {
    let mut total = 0.0;
    for (lost, s) in branches {
        for (k, z) in s {
            let n = (0..3).filter(|&p| !lost[p] && k[2 * p + 1] < 2).count();
            total += n as f64 * z.norm_sqr();
        }
    }
    total / 3.0
}

pub fn resonant_r(x: f64) -> f64 {
    (4.0 * x * x - 1.0) / (4.0 * x * x + 1.0)
}

/// Pre-measurement fidelity from the oracle.
pub fn fidelity(co: &Coeffs, r: C, r0: C) -> f64 {
    let s = input(co);
    let ideal = run_all(&s, c(1.0), c(-1.0));
    let real = outputs_only(&run_all(&s, r, r0));
    inner(&ideal, &real).norm_sqr() / norm_sqr(&real)
}

/// Average of the all-photons-out efficiency over real product inputs,
/// from the dense operator built column by column.
pub fn average_efficiency_all_out(r: C, r0: C) -> f64 {
    (0..64)
        .map(|k| norm_sqr(&outputs_only(&run_all(&input(&basis_coeffs(k)), r, r0))))
        .sum::<f64>()
        / 64.0
}

pub fn average_efficiency_fraction(r: C, r0: C) -> f64 {
    (0..64)
        .map(|k| fraction_out(&loss_branches(&input(&basis_coeffs(k)), r, r0)))
        .sum::<f64>()
        / 64.0
}

/// Checkpoint states written term by term, for step `k` in `1..=8`.
pub fn checkpoint(k: usize, co: &Coeffs) -> Sparse {
    let [al, sg, be, ze, de, xi] = *co;
    let e13 = |_s: u8| c(H);
    let e24 = |s: u8| c(if s == 0 { H } else { -H });
    let delta = |a: bool| if a { c(1.0) } else { c(0.0) };
    let xi_c = |sc: u8| if sc < 2 { xi[sc as usize] } else { c(0.0) };
    // entangled polarization / c-path factor after step 4
    let kfac = |pa: u8, s2: u8, pb: u8, s1: u8, sc: u8| -> C {
        let bterm = |pb: u8, s1: u8| {
            if pb == 0 && s1 == 1 {
                Some(be[0])
            } else if pb == 1 && s1 == 0 {
                Some(be[1])
            } else {
                None
            }
        };
        match (pa, s2) {
            (0, 0) => al[0] * bterm(pb, s1).unwrap_or(c(0.0)) * xi_c(sc),
            (1, 1) => {
                let Some(bv) = bterm(pb, s1) else {
                    return c(0.0);
                };
                let cpath = if pb == 1 {
                    match sc {
                        0 => xi[0],
                        1 => -xi[1],
                        _ => c(0.0),
                    }
                } else {
                    xi_c(sc)
                };
                al[1] * bv * cpath
            }
            _ => c(0.0),
        }
    };
    let mut s = Sparse::new();
    for idx in 0..(2 * 2 * 2 * 2 * 2 * 5 * 16usize) {
        let mut rest = idx;
        let mut key = [0u8; 10];
        for i in (0..10).rev() {
            key[i] = (rest % DIMS[i] as usize) as u8;
            rest /= DIMS[i] as usize;
        }
        let [pa, sa, pb, sb, pc, sc, s1, s2, s3, s4] = key;
        let (pa_, sa_, sb_, pc_) = (pa as usize, sa as usize, sb as usize, pc as usize);
        let z = match k {
            1 => {
                let bt = if pb == 0 {
                    be[0] * delta(s1 == 1)
                } else {
                    be[1] * delta(s1 == 0)
                };
                al[pa_] * sg[sa_] * de[pc_] * xi_c(sc) * e24(s2) * e13(s3) * e24(s4) * ze[sb_] * bt
            }
            2 | 3 => {
                let bc = if pb == 0 && s1 == 1 {
                    be[0]
                        * match sc {
                            0 => xi[0],
                            2 => -xi[1],
                            _ => c(0.0),
                        }
                } else if pb == 1 && s1 == 0 {
                    be[1] * xi_c(sc)
                } else {
                    c(0.0)
                };
                let front = if k == 2 {
                    al[pa_] * e24(s2)
                } else if pa == 0 && s2 == 0 {
                    al[0]
                } else if pa == 1 && s2 == 1 {
                    al[1]
                } else {
                    c(0.0)
                };
                front * sg[sa_] * ze[sb_] * de[pc_] * e13(s3) * e24(s4) * bc
            }
            4 => sg[sa_] * ze[sb_] * de[pc_] * e13(s3) * e24(s4) * kfac(pa, s2, pb, s1, sc),
            5 => {
                let bz = if sb == 0 && s3 == 0 {
                    ze[0]
                } else if sb == 1 && s3 == 1 {
                    ze[1]
                } else {
                    c(0.0)
                };
                kfac(pa, s2, pb, s1, sc) * sg[sa_] * bz * de[pc_] * e24(s4)
            }
            6 | 7 => {
                let a_part = if k == 6 {
                    sg[sa_] * e24(s4)
                } else if sa == 0 && s4 == 1 {
                    sg[0]
                } else if sa == 1 && s4 == 0 {
                    sg[1]
                } else {
                    c(0.0)
                };
                // b1, NV3 = +: delta1 R on the main arm, delta2 R on its side arm
                let bc = if sb == 0 && s3 == 0 && pc == 0 {
                    match sc {
                        0 | 1 => ze[0] * de[0] * kfac(pa, s2, pb, s1, sc),
                        3 | 4 => ze[0] * de[1] * kfac(pa, s2, pb, s1, sc - 3),
                        _ => c(0.0),
                    }
                } else if sb == 1 && s3 == 1 {
                    // b2, NV3 = -: L sits on the side arm until the splitters recombine
                    match (pc, sc) {
                        (0, 0 | 1) => ze[1] * de[0] * kfac(pa, s2, pb, s1, sc),
                        (1, 3 | 4) => ze[1] * de[1] * kfac(pa, s2, pb, s1, sc - 3),
                        _ => c(0.0),
                    }
                } else {
                    c(0.0)
                };
                a_part * bc
            }
            8 => {
                let bz = |sb: u8, s3: u8| {
                    if sb == 0 && s3 == 0 {
                        ze[0]
                    } else if sb == 1 && s3 == 1 {
                        ze[1]
                    } else {
                        c(0.0)
                    }
                };
                let rest = if sa == 0 && s4 == 1 {
                    sg[0] * bz(sb, s3) * de[pc_]
                } else if sa == 1 && s4 == 0 {
                    let flip = if sb == 1 && pc == 1 { -1.0 } else { 1.0 };
                    sg[1] * bz(sb, s3) * de[pc_] * flip
                } else {
                    c(0.0)
                };
                kfac(pa, s2, pb, s1, sc) * rest
            }
            _ => panic!("no checkpoint {k}"),
        };
        if z.norm() > 0.0 {
            s.insert(key, z);
        }
    }
    let n = norm_sqr(&s).sqrt();
    s.values_mut().for_each(|z| *z /= n);
    s
}

/// `|<a|b>|` for normalized sparse states.
pub fn overlap_mag(a: &Sparse, b: &Sparse) -> f64 {
    inner(a, b).norm() / (norm_sqr(a) * norm_sqr(b)).sqrt()
}

/// Library amplitudes (canonical layout order) as a sparse map.
pub fn from_dense(amps: &[C]) -> Sparse {
    let mut s = Sparse::new();
    for (i, z) in amps.iter().enumerate() {
        if *z == c(0.0) {
            continue;
        }
        let mut rest = i;
        let mut key = [0u8; 10];
        for d in (0..10).rev() {
            key[d] = (rest % DIMS[d] as usize) as u8;
            rest /= DIMS[d] as usize;
        }
        s.insert(key, *z);
    }
    s
}

/// Largest amplitude difference, treating missing keys as zero.
pub fn max_diff(a: &Sparse, b: &Sparse) -> f64 {
    let mut m: f64 = 0.0;
    for (k, x) in a {
        m = m.max((x - b.get(k).copied().unwrap_or(c(0.0))).norm());
    }
    for (k, y) in b {
        if !a.contains_key(k) {
            m = m.max(y.norm());
        }
    }
    m
}
