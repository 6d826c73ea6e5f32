use manyauto::cmcrit::{frobenius_evidence, Evidence, FrobeniusOptions, Verdict};
use std::time::Instant;

fn main() {
    let id = std::env::args().nth(1).unwrap();
    let opts = FrobeniusOptions::default();
    let t = Instant::now();
    match frobenius_evidence(&id, &opts) {
        Ok((v, Evidence::Frobenius { data, outcome, simple, notes })) => {
            for d in &data {
                println!(
                    "p={} very_good={} irred={} deg={}",
                    d.p, d.very_good, d.irreducible, d.degree
                );
            }
            println!(
                "{id}: verdict={:?} product={} bound={} simple={simple} [{:.1?}]",
                v, outcome.product, outcome.bound, t.elapsed()
            );
            println!("notes={notes:?}");
            println!("diag={:?}", outcome.diagnostics);
        }
        other => println!("{id}: unexpected {other:?}"),
    }
}
