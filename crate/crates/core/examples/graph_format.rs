//! Builds, prints, parses and validates port-labeled graphs.

use rendezvous::graph::{corpus_graph, parse_graph};
use rendezvous::Graph;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ring = Graph::oriented_ring(5)?;
    println!("oriented ring, port 0 clockwise:\n{ring}");

    let star = Graph::star(4)?;
    println!("star with center 0:\n{star}");

    let corpus = corpus_graph();
    println!("fixed 8-node test graph: {} edges", corpus.edge_count());
    for v in corpus.nodes() {
        let hops: Vec<String> = (0..corpus.degree(v))
            .map(|p| {
                let (w, q) = corpus.traverse(v, p).expect("port exists");
                format!("port {p} -> node {w} (arrives on {q})")
            })
            .collect();
        println!("  node {v}: {}", hops.join(", "));
    }

    // Each line lists `(neighbour entry_port)` in port order.
    let text = "n 4\n0: (1 0) (3 1)\n1: (0 0) (2 0)\n2: (1 1) (3 0)\n3: (2 1) (0 1)\n";
    let square = parse_graph(text)?;
    println!("\nparsed a {}-cycle, round trip equal: {}", square.node_count(), square.to_string().parse::<Graph>()? == square);

    for bad in [
        "n 3\n0: (1 0)\n1: (0 0)\n2:\n",
        "n 2\n0: (1 0) (1 1)\n1: (0 0) (0 1)\n",
        "n 2\n0: (0 0)\n1:\n",
    ] {
        match parse_graph(bad) {
            Ok(_) => println!("unexpectedly accepted:\n{bad}"),
            Err(e) => println!("rejected: {e}"),
        }
    }
    Ok(())
}
