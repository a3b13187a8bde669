//! FEN core-verification gadgets with bounded degree and coalition size.

use super::{Bounds, Builder, CaseKind, GeneratedCase, Witness, X3CInstance};
use crate::error::{Error, Result};
use crate::model::Partition;
use crate::verdict::Mode;

fn conflicting_sets(x3c: &X3CInstance) -> Vec<(usize, usize)> {
    let m = x3c.sets.len();
    (0..m)
        .flat_map(|j| (j + 1..m).map(move |z| (j, z)))
        .filter(|&(j, z)| x3c.intersects(j, z))
        .collect()
}

/// Core verification: a strictly blocking coalition exists iff the seed
/// has an exact cover. One arc closes the only cycle.
pub fn gen_fen_core_f1(x3c: &X3CInstance) -> Result<GeneratedCase> {
    x3c.validate()?;
    if x3c.sets.is_empty() {
        return Err(Error::InvalidSeed("at least one set is required".into()));
    }
    let cover = x3c.resolve_cover()?;
    let n_el = x3c.elements();
    let m = x3c.sets.len();
    let mut b = Builder::new();
    let a: Vec<usize> = (1..=n_el).map(|i| b.agent(format!("a_{i}"))).collect();
    let mut c = Vec::with_capacity(m);
    let mut d = Vec::with_capacity(m);
    let mut x = Vec::with_capacity(m);
    for j in 1..=m {
        c.push(b.agent(format!("c_{j}")));
        d.push([b.agent(format!("d_{j}^1")), b.agent(format!("d_{j}^2"))]);
        x.push(b.agent(format!("x_{j}")));
    }
    let s: Vec<usize> = (1..=n_el).map(|l| b.agent(format!("s_{l}"))).collect();
    let t: Vec<usize> = (1..n_el).map(|l| b.agent(format!("t_{l}"))).collect();

    for l in 0..n_el - 1 {
        b.friend(s[l], s[l + 1]);
        b.friend(s[l], t[l]);
    }
    for l in 0..n_el {
        b.friend(s[l], a[l]);
    }
    for (j, set) in x3c.sets.iter().enumerate() {
        for &e in set {
            b.friend(a[e], c[j]);
        }
        b.friend(c[j], d[j][0]);
        b.friend(d[j][0], d[j][1]);
        b.friend(c[j], x[j]);
        b.enemy(c[j], d[j][1]);
        if j + 1 < m {
            b.friend(x[j], x[j + 1]);
        }
    }
    b.friend(x[m - 1], s[0]);
    for (j, z) in conflicting_sets(x3c) {
        b.enemy(c[j], c[z]);
    }

    let mut coalitions: Vec<Vec<usize>> = (0..n_el - 1).map(|l| vec![s[l], t[l]]).collect();
    coalitions.push(vec![s[n_el - 1]]);
    coalitions.extend(a.iter().map(|&v| vec![v]));
    coalitions.extend((0..m).map(|j| vec![c[j], d[j][0], d[j][1]]));
    coalitions.extend(x.iter().map(|&v| vec![v]));
    let (instance, labels) = b.finish_fen();
    let pi = Partition::new(instance.n(), coalitions)?;

    let witness = cover.as_ref().and_then(|c| c.as_ref()).map(|cov| {
        let mut w: Vec<usize> = s.iter().chain(&a).chain(&x).copied().collect();
        w.extend(cov.iter().map(|&j| c[j]));
        w.sort_unstable();
        Witness::Coalition(w)
    });
    Ok(GeneratedCase {
        reduction: "fen-core-f1",
        kind: CaseKind::Verification(Mode::Core),
        instance,
        pi: Some(pi),
        ground_truth: cover.map(|c| c.is_some()),
        labels,
        witness,
        bounds: Bounds {
            max_delta: Some(12),
            max_kappa: Some(3),
            max_fas: Some(1),
            ..Bounds::default()
        },
    })
}

/// Strict-core verification on an acyclic instance: a weakly blocking
/// coalition exists iff the seed has an exact cover. Every element must lie
/// in exactly three sets.
pub fn gen_fen_strictcore_dag(x3c: &X3CInstance) -> Result<GeneratedCase> {
    x3c.validate()?;
    if let Some((e, k)) = x3c
        .occurrences()
        .into_iter()
        .enumerate()
        .find(|&(_, k)| k != 3)
    {
        return Err(Error::InvalidSeed(format!(
            "element {e} lies in {k} sets, exactly 3 required"
        )));
    }
    let cover = x3c.resolve_cover()?;
    let n_el = x3c.elements();
    let m = x3c.sets.len();
    let mut b = Builder::new();
    let a: Vec<usize> = (1..=n_el).map(|i| b.agent(format!("a_{i}"))).collect();
    let bb: Vec<usize> = (1..=n_el).map(|i| b.agent(format!("b_{i}"))).collect();
    let c: Vec<usize> = (1..=m).map(|j| b.agent(format!("c_{j}"))).collect();
    let s: Vec<usize> = (1..=n_el).map(|l| b.agent(format!("s_{l}"))).collect();
    // Private agents of s_l; the last special agent has a single one.
    let t: Vec<Vec<usize>> = (1..=n_el)
        .map(|l| {
            if l < n_el {
                vec![b.agent(format!("t_{l}^1")), b.agent(format!("t_{l}^2"))]
            } else {
                vec![b.agent(format!("t_{l}"))]
            }
        })
        .collect();
    let g = b.agent("g");
    let g1 = b.agent("g^1");
    let g2 = b.agent("g^2");

    for l in 0..n_el {
        for &tl in &t[l] {
            b.friend(s[l], tl);
            if l + 1 < n_el {
                b.enemy(tl, s[l + 1]);
            }
            b.enemy(tl, a[l]);
        }
        b.friend(s[l], a[l]);
        b.enemy(s[l], bb[l]);
        if l + 1 < n_el {
            b.friend(s[l], s[l + 1]);
            for &tn in &t[l + 1] {
                b.enemy(s[l], tn);
            }
        }
    }
    for i in 0..n_el {
        b.friend(a[i], bb[i]);
    }
    for (j, set) in x3c.sets.iter().enumerate() {
        for &e in set {
            b.friend(a[e], c[j]);
            b.enemy(bb[e], c[j]);
        }
    }
    for (j, z) in conflicting_sets(x3c) {
        b.enemy(c[j], c[z]);
    }
    b.friend(g, s[0]);
    b.friend(g, g1);
    b.friend(g1, g2);
    b.enemy(g, g2);
    b.enemy(g1, s[0]);
    for &t1 in &t[0] {
        b.enemy(g, t1);
    }

    let mut coalitions: Vec<Vec<usize>> = (0..n_el)
        .map(|l| {
            let mut coal = vec![s[l]];
            coal.extend(&t[l]);
            coal
        })
        .collect();
    coalitions.extend((0..n_el).map(|i| vec![a[i], bb[i]]));
    coalitions.extend(c.iter().map(|&v| vec![v]));
    coalitions.push(vec![g, g1, g2]);
    let (instance, labels) = b.finish_fen();
    let pi = Partition::new(instance.n(), coalitions)?;

    let witness = cover.as_ref().and_then(|c| c.as_ref()).map(|cov| {
        let mut w: Vec<usize> = s.iter().chain(&a).copied().collect();
        w.extend(cov.iter().map(|&j| c[j]));
        w.push(g);
        w.sort_unstable();
        Witness::Coalition(w)
    });
    Ok(GeneratedCase {
        reduction: "fen-strictcore-dag",
        kind: CaseKind::Verification(Mode::StrictCore),
        instance,
        pi: Some(pi),
        ground_truth: cover.map(|c| c.is_some()),
        labels,
        witness,
        bounds: Bounds {
            max_delta: Some(12),
            max_kappa: Some(3),
            max_fas: Some(0),
            ..Bounds::default()
        },
    })
}
