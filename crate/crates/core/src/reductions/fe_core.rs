//! FE core-verification gadgets: the f = 1 construction with at most three
//! friends per agent, and the degree-4 construction.

use super::{Bounds, Builder, CaseKind, GeneratedCase, Side, Witness, X3CInstance};
use crate::error::{Error, Result};
use crate::model::Partition;
use crate::verdict::Mode;

/// Cover ⟺ the generated partition is blocked. The strict-core variant
/// drops the last agent of the special cycle. The three-friends bound needs
/// every element in at most three sets; `check_bounds` reports seeds that
/// break it.
pub fn gen_fe_core_f1(x3c: &X3CInstance, mode: Mode) -> Result<GeneratedCase> {
    x3c.validate()?;
    let cover = x3c.resolve_cover()?;
    let n_el = x3c.elements();
    let mut b = Builder::new();
    let a: Vec<usize> = (0..n_el).map(|i| b.agent(format!("a_{}", i + 1))).collect();
    let c: Vec<usize> = (0..x3c.sets.len())
        .map(|j| b.agent(format!("c_{}", j + 1)))
        .collect();
    let cycle_len = match mode {
        Mode::Core => 4 * x3c.n_hat + 3,
        Mode::StrictCore => 4 * x3c.n_hat + 2,
    };
    let s: Vec<usize> = (0..cycle_len).map(|z| b.agent(format!("s_{z}"))).collect();
    // x[i - 1] is x_i for i in 1..3n̂.
    let x: Vec<usize> = (1..n_el).map(|i| b.agent(format!("x_{i}"))).collect();

    for &cj in &c {
        b.friend(cj, s[0]);
    }
    for i in 1..=n_el {
        b.friend(s[i], a[i - 1]);
    }
    for (j, set) in x3c.sets.iter().enumerate() {
        for &e in set {
            b.friend(a[e], c[j]);
        }
    }
    for z in 0..cycle_len {
        b.friend(s[z], s[(z + 1) % cycle_len]);
    }
    for i in 1..n_el {
        b.friend(s[i], x[i - 1]);
        b.friend(x[i - 1], s[i + 1]);
        b.friend(x[i - 1], s[n_el + 1]);
    }

    let mut big: Vec<usize> = s.clone();
    big.extend(&x);
    let mut coalitions = vec![big];
    coalitions.extend(a.iter().chain(&c).map(|&v| vec![v]));
    let (instance, labels) = b.finish_fe();
    let pi = Partition::new(instance.n(), coalitions)?;

    let witness = cover.as_ref().and_then(|c_opt| c_opt.as_ref()).map(|cov| {
        let mut w: Vec<usize> = a.clone();
        w.extend(cov.iter().map(|&j| c[j]));
        w.extend(&s[..=n_el]);
        w.sort_unstable();
        Witness::Coalition(w)
    });
    Ok(GeneratedCase {
        reduction: "fe-core-f1",
        kind: CaseKind::Verification(mode),
        instance,
        pi: Some(pi),
        ground_truth: cover.map(|c| c.is_some()),
        labels,
        witness,
        bounds: Bounds {
            max_out_friends: Some(3),
            max_fas: Some(1),
            ..Bounds::default()
        },
    })
}

/// Cover ⟺ the generated partition is blocked (for both modes). Every
/// element has a long private cycle, an out-side and an in-side gadget; each
/// set attaches to the side given by the seed.
pub fn gen_fe_core_planar4(x3c: &X3CInstance, mode: Mode) -> Result<GeneratedCase> {
    x3c.validate()?;
    let sides = x3c
        .side
        .as_ref()
        .ok_or_else(|| Error::InvalidSeed("every set needs an out/in side".into()))?;
    if x3c.sets.is_empty() {
        return Err(Error::InvalidSeed("at least one set is required".into()));
    }
    let n_el = x3c.elements();
    // Which gadget vertex (1 or 2) each (set, element) returns to.
    let mut used = vec![[0usize; 2]; n_el];
    let mut ret = vec![[0usize; 3]; x3c.sets.len()];
    for (j, set) in x3c.sets.iter().enumerate() {
        let side = (sides[j] == Side::In) as usize;
        for (p, &e) in set.iter().enumerate() {
            used[e][side] += 1;
            if used[e][side] > 2 {
                return Err(Error::InvalidSeed(format!(
                    "element {e} lies in more than two sets on one side"
                )));
            }
            ret[j][p] = used[e][side];
        }
    }
    let cover = x3c.resolve_cover()?;
    let len = 27 * x3c.n_hat; // L + 1 agents on each private cycle

    let mut b = Builder::new();
    struct Element {
        x: usize,
        s: usize,
        t: usize,
        ring: Vec<usize>,
        gad: [[usize; 4]; 2],
    }
    let els: Vec<Element> = (0..n_el)
        .map(|i| {
            let l = i + 1;
            let x = b.agent(format!("x_{l}"));
            let s = b.agent(format!("s_{l}"));
            let t = b.agent(format!("t_{l}"));
            let ring = (0..len).map(|z| b.agent(format!("x_{l}^{z}"))).collect();
            let gad =
                ["a", "b"].map(|name| [0, 1, 2, 3].map(|z| b.agent(format!("{name}_{l}^{z}"))));
            Element { x, s, t, ring, gad }
        })
        .collect();
    // cd[j][p] = (c_j^e, d_j^e) for the p-th element of set j in input order.
    let cd: Vec<Vec<(usize, usize)>> = x3c
        .sets
        .iter()
        .enumerate()
        .map(|(j, set)| {
            set.iter()
                .map(|&e| {
                    (
                        b.agent(format!("c_{}^{}", j + 1, e + 1)),
                        b.agent(format!("d_{}^{}", j + 1, e + 1)),
                    )
                })
                .collect()
        })
        .collect();

    for (i, el) in els.iter().enumerate() {
        b.mutual(el.x, el.ring[0]);
        for z in 0..len {
            b.friend(el.ring[z], el.ring[(z + 1) % len]);
        }
        b.friend(el.x, el.s);
        for side in 0..2 {
            let g = el.gad[side];
            b.friend(el.s, g[0]);
            b.friend(g[0], el.t);
            b.friend(g[0], g[1]);
            b.friend(g[1], g[2]);
            b.friend(g[2], g[0]);
            b.friend(g[1], g[3]);
            b.friend(g[2], g[3]);
        }
        b.friend(el.t, els[(i + 1) % n_el].x);
    }
    for (j, set) in x3c.sets.iter().enumerate() {
        let side = (sides[j] == Side::In) as usize;
        for (p, &e) in set.iter().enumerate() {
            let (cj, dj) = cd[j][p];
            b.mutual(cj, dj);
            let g = els[e].gad[side];
            b.friend(g[3], dj);
            b.friend(dj, g[ret[j][p]]);
        }
        // Triangle over the set's connection agents in element order.
        let sorted = x3c.sorted_set(j);
        let at = |e: usize| cd[j][set.iter().position(|&f| f == e).expect("element in set")].0;
        b.friend(at(sorted[0]), at(sorted[1]));
        b.friend(at(sorted[1]), at(sorted[2]));
        b.friend(at(sorted[2]), at(sorted[0]));
    }

    let mut coalitions = Vec::new();
    for el in &els {
        let mut ring = vec![el.x];
        ring.extend(&el.ring);
        coalitions.push(ring);
        coalitions.push(vec![el.s]);
        coalitions.push(vec![el.t]);
        for g in el.gad {
            coalitions.push(g[..3].to_vec());
            coalitions.push(vec![g[3]]);
        }
    }
    for row in &cd {
        for &(cj, dj) in row {
            coalitions.push(vec![cj, dj]);
        }
    }
    let (instance, labels) = b.finish_fe();
    let pi = Partition::new(instance.n(), coalitions)?;

    let witness = cover.as_ref().and_then(|c| c.as_ref()).map(|cov| {
        let mut w = Vec::new();
        for el in &els {
            w.extend([el.x, el.s, el.t]);
        }
        for &j in cov {
            let side = (sides[j] == Side::In) as usize;
            for (p, &e) in x3c.sets[j].iter().enumerate() {
                w.extend([cd[j][p].0, cd[j][p].1]);
                w.extend(els[e].gad[side]);
            }
        }
        w.sort_unstable();
        Witness::Coalition(w)
    });
    Ok(GeneratedCase {
        reduction: "fe-core-planar4",
        kind: CaseKind::Verification(mode),
        instance,
        pi: Some(pi),
        ground_truth: cover.map(|c| c.is_some()),
        labels,
        witness,
        bounds: Bounds {
            max_delta: Some(4),
            ..Bounds::default()
        },
    })
}
