#![no_main]

use libfuzzer_sys::fuzz_target;
use resgraph::{lipman, parse_graph_document, validate_graph};

// Small graphs only; the searches are exponential in the vertex count.
fuzz_target!(|data: &[u8]| {
    let Ok(doc) = parse_graph_document(data) else { return };
    if doc.vertices.len() > 6 {
        return;
    }
    let Ok(g) = validate_graph(&doc) else { return };
    let z = lipman::fundamental_cycle(&g);
    assert!(lipman::is_antinef(&g, &z));
    assert!(z.is_strictly_positive());
    if let Some(map) = &doc.l_vector {
        if let Ok(values) = g.vector_from_map(map) {
            if let Ok(l) = resgraph::LVector::for_graph(&g, values) {
                let _ = g.multiplicities_from_l(&l);
            }
        }
    }
});
