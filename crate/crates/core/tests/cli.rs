use std::fs;
use std::path::PathBuf;

use lapdist::cli::{run, Outcome};
use lapdist::transforms::read_jsonl;
use lapdist::Tree;

fn go(args: &[&str]) -> Outcome {
    run(std::iter::once("lapdist").chain(args.iter().copied()))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lapdist-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, text: &str) -> String {
    let p = scratch(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn sigma_on_p3() {
    let p = write("p3.tree", "3\n0 1\n1 2\n");
    let o = go(&["sigma", &p]);
    assert_eq!(o.code, 0);
    assert_eq!(o.output, "n=3 d_n=4/3 m_below=2 sigma=1\n");
    assert_eq!(go(&["sigma", &p, "--float"]).output, o.output);
    let j: serde_json::Value = serde_json::from_str(&go(&["sigma", &p, "--json"]).output).unwrap();
    assert_eq!(j["sigma"], 1);
    assert_eq!(j["d_n"], "4/3");
}

#[test]
fn malformed_input_reports_line() {
    let p = write("bad.tree", "# comment\n3\n0 1\n1 two\n");
    let o = go(&["sigma", &p]);
    assert_eq!(o.code, 2);
    assert!(o.output.contains("line 4"), "{}", o.output);
    assert_eq!(go(&["sigma", "/nonexistent/x.tree"]).code, 2);
}

#[test]
fn count_intervals_and_float_refusal() {
    // P_3 spectrum {0, 1, 3}.
    let p = write("p3c.tree", "3\n0 1\n1 2\n");
    assert_eq!(go(&["count", &p, "--lo", "0", "--hi", "3"]).output, "n=3 m[0, 3)=2\n");
    assert_eq!(
        go(&["count", &p, "--lo", "0", "--hi", "3", "--hi-closed"]).output,
        "n=3 m[0, 3]=3\n"
    );
    assert_eq!(
        go(&["count", &p, "--lo", "0", "--hi", "3", "--lo-open"]).output,
        "n=3 m(0, 3)=1\n"
    );
    assert_eq!(
        go(&["count", &p, "--lo", "-1/2", "--hi", "1/2", "--float"]).output,
        "n=3 m[-1/2, 1/2)=1\n"
    );
    let amb = go(&["count", &p, "--lo", "1", "--hi", "2", "--float"]);
    assert_eq!(amb.code, 2);
    assert!(amb.output.contains("--exact"));
    assert_eq!(go(&["count", &p, "--lo", "2", "--hi", "1"]).code, 2);
}

#[test]
fn verify_small_orders() {
    let o = go(&["verify", "--max-n", "10", "--jobs", "4"]);
    assert_eq!(o.code, 0);
    assert!(o.output.contains("106 trees at n=10 ... 0 violations"), "{}", o.output);
    let j: serde_json::Value = serde_json::from_str(&go(&["verify", "--max-n", "8", "--json"]).output).unwrap();
    assert_eq!(j["violations"].as_array().unwrap().len(), 0);
    assert_eq!(go(&["verify", "--max-n", "10", "--jobs", "0"]).code, 2);
    assert_eq!(go(&["verify", "--max-n", "21"]).code, 2);
}

#[test]
fn prototype_dot_has_nine_nodes_and_a_degree_four_centre() {
    let dot = scratch("proto9.dot");
    let o = go(&["prototype", "--n", "9", "--dot", dot.to_str().unwrap()]);
    assert_eq!(o.code, 0);
    let text = fs::read_to_string(&dot).unwrap();
    let mut nodes = 0;
    let mut deg = [0usize; 9];
    for line in text.lines().map(str::trim) {
        if let Some((a, b)) = line.trim_end_matches(';').split_once(" -- ") {
            deg[a.parse::<usize>().unwrap()] += 1;
            deg[b.parse::<usize>().unwrap()] += 1;
        } else if line.ends_with(';') && !line.starts_with("node") {
            nodes += 1;
        }
    }
    assert_eq!(nodes, 9);
    assert_eq!(*deg.iter().max().unwrap(), 4);
    assert_eq!(deg[0], 4);
}

#[test]
fn transform_trace_replays_to_the_same_tree() {
    let input = concat!(env!("CARGO_MANIFEST_DIR"), "/data/worked_example_n53.tree");
    let trace = scratch("t53.jsonl");
    let dot = scratch("t53.dot");
    let o = go(&[
        "transform",
        input,
        "--trace",
        trace.to_str().unwrap(),
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(o.code, 0, "{}", o.output);
    assert!(o.output.ends_with("final u + P_0*S_13 ⊕ P_0*S_13 sigma=26\n"));
    let parsed = read_jsonl(&fs::read_to_string(&trace).unwrap()).unwrap();
    let r = go(&["replay", trace.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.output);
    assert!(r.output.contains("final canonical code matches"));
    let graphs = fs::read_to_string(&dot).unwrap().matches("graph ").count();
    let real_steps = parsed.steps.iter().filter(|s| !s.kind.is_marker()).count();
    assert_eq!(graphs, 1 + real_steps);

    // Swapping the recorded final tree for another one is caught.
    let text = fs::read_to_string(&trace).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let path = Tree::path(53);
    let last = serde_json::json!({"record": "final", "n": 53, "edges": path.edges(), "summary": "path"});
    *lines.last_mut().unwrap() = last.to_string();
    let tampered = write("tampered.jsonl", &lines.join("\n"));
    assert_eq!(go(&["replay", &tampered]).code, 1);
    let broken = write("broken.jsonl", "{\"record\": \"initial\"}\n");
    let b = go(&["replay", &broken]);
    assert_eq!(b.code, 2);
    assert!(b.output.contains("line 1"));
}

#[test]
fn transform_rejects_small_trees() {
    let p = write("p5.tree", "5\n0 1\n1 2\n2 3\n3 4\n");
    assert_eq!(go(&["transform", &p]).code, 2);
}

#[test]
fn bench_counts_add_up() {
    for mode in ["float", "exact"] {
        let o = go(&["bench", "--n", "2000", "--mode", mode, "--seed", "9"]);
        assert_eq!(o.code, 0);
        let field = |k: &str| -> usize {
            o.output
                .split_whitespace()
                .find_map(|w| w.strip_prefix(&format!("{k}=")))
                .unwrap()
                .parse()
                .unwrap()
        };
        assert_eq!(field("negative") + field("positive") + field("ambiguous"), 2000);
        assert_eq!(field("total"), 2000);
    }
    assert_eq!(go(&["bench", "--n", "10", "--mode", "approx"]).code, 2);
}

#[test]
fn enumerate_writes_every_tree() {
    let out = scratch("trees9.jsonl");
    let o = go(&["enumerate", "--n", "9", "--jobs", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.code, 0);
    assert!(o.output.starts_with("47 trees at n=9\n"));
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 47);
}
