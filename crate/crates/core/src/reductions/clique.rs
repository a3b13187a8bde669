use super::{clique_bruteforce, Bounds, Builder, CaseKind, CliqueInstance, GeneratedCase, Witness};
use crate::error::{Error, Result};
use crate::model::Partition;
use crate::verdict::Mode;

/// Symmetric FE instance whose partition is blocked iff the seed graph has
/// an `h`-clique. Strict-core mode drops the last private agent of every
/// edge gadget.
pub fn gen_fe_core_clique(g: &CliqueInstance, mode: Mode) -> Result<GeneratedCase> {
    let h = g.h;
    if h < 3 {
        return Err(Error::InvalidSeed(format!(
            "target clique size {h} is below 3"
        )));
    }
    let private_edge = h + h * (h - 1) / 2 - usize::from(mode == Mode::StrictCore);
    let mut b = Builder::new();
    let mut coalitions = Vec::new();
    let mut u = Vec::with_capacity(g.vertices);
    for i in 0..g.vertices {
        let ui = b.agent(format!("u_{}", i + 1));
        let priv_: Vec<usize> = (1..=h - 2)
            .map(|j| b.agent(format!("a_{}^{j}", i + 1)))
            .collect();
        for (p, &x) in priv_.iter().enumerate() {
            b.mutual(x, ui);
            for &y in &priv_[p + 1..] {
                b.mutual(x, y);
            }
        }
        let mut coal = vec![ui];
        coal.extend(priv_);
        coalitions.push(coal);
        u.push(ui);
    }
    let mut f = Vec::with_capacity(g.edges.len());
    for &(i, j) in &g.edges {
        let name = format!("{}_{}", i + 1, j + 1);
        let fe = b.agent(format!("f_{name}"));
        let priv_: Vec<usize> = (1..=private_edge)
            .map(|z| b.agent(format!("b_{name}^{z}")))
            .collect();
        for (p, &x) in priv_.iter().enumerate() {
            for &y in &priv_[p + 1..] {
                b.mutual(x, y);
            }
        }
        b.mutual(fe, priv_[0]);
        b.mutual(fe, priv_[1]);
        b.mutual(fe, u[i]);
        b.mutual(fe, u[j]);
        let mut coal = vec![fe];
        coal.extend(priv_);
        coalitions.push(coal);
        f.push(fe);
    }
    let (instance, labels) = b.finish_fe();
    let pi = Partition::new(instance.n(), coalitions)?;

    let clique = clique_bruteforce(g);
    let witness = clique.as_ref().map(|k| {
        let mut w: Vec<usize> = k.iter().map(|&i| u[i]).collect();
        for (e, &(i, j)) in g.edges.iter().enumerate() {
            if k.contains(&i) && k.contains(&j) {
                w.push(f[e]);
            }
        }
        w.sort_unstable();
        Witness::Coalition(w)
    });
    Ok(GeneratedCase {
        reduction: "fe-core-clique",
        kind: CaseKind::Verification(mode),
        instance,
        pi: Some(pi),
        ground_truth: Some(clique.is_some()),
        labels,
        witness,
        bounds: Bounds {
            max_kappa: Some(h + h * (h - 1) / 2 + 1),
            symmetric: true,
            ..Bounds::default()
        },
    })
}
