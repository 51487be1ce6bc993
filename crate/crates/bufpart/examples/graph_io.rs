//! Reading an edge list with vertex weights, checking a hand-made
//! partition, and emitting the report as exact JSON.

use bufpart::io::{format_edges, parse_graph};
use bufpart::report::{to_json, Assignment};
use bufpart::validate_partition;

const EDGES: &str = "\
# u v cost
a b 2
b c 1
c d 2
d a 0.5
";

const WEIGHTS: &str = "a 3\nb 3\nc 6\nd 3\n";

fn main() -> bufpart::Result<()> {
    let g = parse_graph(EDGES, Some(WEIGHTS))?;
    println!("{} vertices, {} edges, W = {}", g.n(), g.m(), g.total_weight());
    print!("{}", format_edges(&g));

    let doc: serde_json::Value = serde_json::from_str(
        r#"{"a":{"part_id":0,"role":"core"},"b":{"part_id":0,"role":"core"},
            "c":{"part_id":1,"role":"core"},"d":{"part_id":1,"role":"buffer"}}"#,
    )?;
    let part = Assignment::parse_partition(&g, &doc, 0.5)?;
    let report = validate_partition(&g, &part);
    print!("{}", to_json(&report)?);
    print!("{}", to_json(&Assignment::from_partition(&g, &part))?);
    Ok(())
}
