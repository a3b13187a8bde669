//! Existence gadgets: a stable partition exists iff the seed has an exact
//! cover.

use super::{Bounds, Builder, CaseKind, GeneratedCase, Witness, X3CInstance};
use crate::error::{Error, Result};
use crate::model::Partition;
use crate::verdict::Notion;

/// FE Nash-stable existence. Every element must lie in one to three sets.
pub fn gen_fe_nashex(x3c: &X3CInstance) -> Result<GeneratedCase> {
    x3c.validate()?;
    if let Some((e, k)) = x3c
        .occurrences()
        .into_iter()
        .enumerate()
        .find(|&(_, k)| k == 0 || k > 3)
    {
        return Err(Error::InvalidSeed(format!(
            "element {e} lies in {k} sets, between 1 and 3 required"
        )));
    }
    let cover = x3c.resolve_cover()?;
    let mut b = Builder::new();
    let x: Vec<usize> = (1..=x3c.elements())
        .map(|i| b.agent(format!("x_{i}")))
        .collect();
    struct SetGadget {
        s: usize,
        sz: [usize; 3],
        t: [usize; 6],
    }
    let gadgets: Vec<SetGadget> = (1..=x3c.sets.len())
        .map(|j| {
            let s = b.agent(format!("s_{j}"));
            let sz = [0, 1, 2].map(|z| b.agent(format!("s_{j}^{z}")));
            let t = [0, 1, 2, 3, 4, 5].map(|z| b.agent(format!("t_{j}^{z}")));
            SetGadget { s, sz, t }
        })
        .collect();
    for (g, set) in gadgets.iter().zip(&x3c.sets) {
        for &e in set {
            b.mutual(x[e], g.s);
        }
        for z in 0..3 {
            b.friend(g.s, g.sz[z]);
            b.friend(g.sz[z], g.sz[(z + 1) % 3]);
            b.friend(g.t[z], g.t[(z + 1) % 3]);
        }
        b.friend(g.sz[0], g.t[0]);
        b.friend(g.t[2], g.t[3]);
        b.mutual(g.t[3], g.t[4]);
        b.friend(g.t[4], g.t[5]);
    }
    let (instance, labels) = b.finish_fe();

    let witness = match cover.as_ref().and_then(|c| c.as_ref()) {
        Some(cov) => {
            let mut coalitions = Vec::new();
            for (j, (g, set)) in gadgets.iter().zip(&x3c.sets).enumerate() {
                if cov.contains(&j) {
                    let mut coal = vec![g.s];
                    coal.extend(set.iter().map(|&e| x[e]));
                    coalitions.push(coal);
                    coalitions.push(g.sz.to_vec());
                } else {
                    let mut coal = vec![g.s];
                    coal.extend(g.sz);
                    coalitions.push(coal);
                }
                coalitions.push(g.t[..3].to_vec());
                coalitions.push(vec![g.t[3], g.t[4]]);
                coalitions.push(vec![g.t[5]]);
            }
            Some(Witness::Partition(Partition::new(
                instance.n(),
                coalitions,
            )?))
        }
        None => None,
    };
    Ok(GeneratedCase {
        reduction: "fe-nashex",
        kind: CaseKind::Existence(Notion::Nash),
        instance,
        pi: None,
        ground_truth: cover.map(|c| c.is_some()),
        labels,
        witness,
        bounds: Bounds {
            max_delta: Some(9),
            ..Bounds::default()
        },
    })
}

/// FEN individually-stable existence. The seed needs an odd number of
/// element triples and every element in exactly three sets.
pub fn gen_fen_individex(x3c: &X3CInstance) -> Result<GeneratedCase> {
    x3c.validate()?;
    if x3c.n_hat.is_multiple_of(2) {
        return Err(Error::InvalidSeed(format!(
            "n_hat = {} must be odd",
            x3c.n_hat
        )));
    }
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
    let next = |i: usize| (i + 1) % n_el;
    let mut b = Builder::new();
    let a: Vec<usize> = (1..=n_el).map(|i| b.agent(format!("a_{i}"))).collect();
    let u: Vec<[usize; 3]> = (1..=n_el)
        .map(|i| {
            [
                b.agent(format!("u_{i}")),
                b.agent(format!("u_{i}^1")),
                b.agent(format!("u_{i}^2")),
            ]
        })
        .collect();
    let c: Vec<usize> = (1..=x3c.sets.len())
        .map(|j| b.agent(format!("c_{j}")))
        .collect();

    for i in 0..n_el {
        b.friend(u[i][1], u[i][0]);
        b.friend(u[i][2], u[i][0]);
        b.friend(a[i], a[next(i)]);
        for (&mine, &theirs) in u[i][1..].iter().zip(&u[next(i)][1..]) {
            b.friend(a[i], mine);
            b.friend(a[i], theirs);
        }
        if i + 1 < n_el {
            b.enemy(u[i][0], u[i + 1][0]);
        }
        b.enemy(a[i], u[next(i)][0]);
    }
    if n_el > 1 {
        b.enemy(u[0][0], u[n_el - 1][0]);
    }
    for (j, set) in x3c.sets.iter().enumerate() {
        for &e in set {
            b.friend(a[e], c[j]);
            for shift in 0..3 {
                b.enemy(u[(e + shift) % n_el][0], c[j]);
            }
        }
        for z in j + 1..x3c.sets.len() {
            if x3c.intersects(j, z) {
                b.enemy(c[j], c[z]);
            }
        }
    }
    let (instance, labels) = b.finish_fen();

    let witness = match cover.as_ref().and_then(|c| c.as_ref()) {
        Some(cov) => {
            let mut coalitions: Vec<Vec<usize>> = u.iter().map(|g| g.to_vec()).collect();
            let mut big = a.clone();
            big.extend(cov.iter().map(|&j| c[j]));
            coalitions.push(big);
            coalitions.extend(
                (0..c.len())
                    .filter(|j| !cov.contains(j))
                    .map(|j| vec![c[j]]),
            );
            Some(Witness::Partition(Partition::new(
                instance.n(),
                coalitions,
            )?))
        }
        None => None,
    };
    Ok(GeneratedCase {
        reduction: "fen-individex",
        kind: CaseKind::Existence(Notion::Individual),
        instance,
        pi: None,
        ground_truth: cover.map(|c| c.is_some()),
        labels,
        witness,
        bounds: Bounds {
            max_delta: Some(18),
            max_fas: Some(1),
            ..Bounds::default()
        },
    })
}
