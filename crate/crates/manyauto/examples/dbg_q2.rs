use manyauto::quotient::quotient_for;
fn main() {
    for id in ["X8", "X11", "X15"] {
        let out = quotient_for(id).unwrap();
        println!("{id}: ctx={:?} genus={} cands={}", out.ctx, out.genus, out.candidates.len());
        println!("  selected rational: {:?}", out.selected.as_qpoly().is_some());
        for (i, c) in out.candidates.iter().enumerate() {
            println!("  cand{}: deg {:?} rational {:?}", i, c.degree(), c.as_qpoly().is_some());
        }
    }
}
