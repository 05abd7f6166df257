//! Validate a quasimodel, unwind each point to a lasso and compare lassos.

use dgl::doc::QuasimodelDoc;
use dgl::quasimodel::{extend_to_lasso, lasso_coherence, neighbourhood_member, scattered_witness, Quasimodel};

fn main() {
    let doc: QuasimodelDoc = serde_json::from_str(include_str!("../fixtures/golden_quasimodel.json")).unwrap();
    let q = Quasimodel::from_doc(&doc, None).unwrap();
    let mut lassos = Vec::new();
    for x in 0..q.len() {
        let l = extend_to_lasso(&q, &[x]).unwrap();
        let d = l.to_doc(&q);
        println!(
            "from {}: stem {:?} loop {:?}, coherent {}",
            q.names()[x],
            d.stem,
            d.cycle,
            lasso_coherence(&q, &l).is_ok()
        );
        lassos.push(l);
    }
    for (i, a) in lassos.iter().enumerate() {
        for (j, b) in lassos.iter().enumerate() {
            if i != j && neighbourhood_member(&q, a, 1, b) {
                println!("lasso {} is in N_1 of lasso {}", q.names()[i], q.names()[j]);
            }
        }
    }
    let distinct: Vec<_> = lassos
        .iter()
        .enumerate()
        .filter(|(i, l)| !lassos[..*i].iter().any(|o| o.same_path(l)))
        .map(|(_, l)| l.clone())
        .collect();
    let (i, m) = scattered_witness(&q, &distinct).unwrap();
    println!("isolated: lasso {i} with m = {m}");
}
