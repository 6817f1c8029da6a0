use std::ffi::CString;
use std::ptr;

use sparsify_ffi::*;

fn make(text: &str) -> *mut SparsifyGraph {
    let c = CString::new(text).unwrap();
    let mut g = ptr::null_mut();
    let st = unsafe { sparsify_graph_parse(c.as_ptr(), &mut g) };
    assert_eq!(st, SparsifyStatus::Ok);
    g
}

#[test]
fn parse_query_free() {
    let g = make("n 4\n0 1\n1 2\n2 3\n");
    unsafe {
        assert_eq!(sparsify_graph_nodes(g), 4);
        assert_eq!(sparsify_graph_edges(g), 3);
        let mut d = 0i64;
        assert_eq!(sparsify_graph_distance(g, 0, 3, &mut d), SparsifyStatus::Ok);
        assert_eq!(d, 3);
        sparsify_graph_free(g);
    }
}

#[test]
fn parse_error_reports_message() {
    let c = CString::new("0 1\nbroken\n").unwrap();
    let mut g = ptr::null_mut();
    let st = unsafe { sparsify_graph_parse(c.as_ptr(), &mut g) };
    assert_eq!(st, SparsifyStatus::ParseError);
    let mut buf = vec![0i8; 128];
    let len = unsafe { sparsify_last_error(buf.as_mut_ptr(), buf.len()) };
    assert!(len > 0);
}

#[test]
fn preserver_round_trip() {
    let g = make("n 4\n0 1\n1 2\n2 3\n0 3\n");
    let pairs = [0u32, 2];
    let mut edges = SparsifyEdges {
        nodes: ptr::null_mut(),
        len: 0,
        capacity: 0,
    };
    unsafe {
        let st = sparsify_naive_preserver(g, pairs.as_ptr(), 1, &mut edges);
        assert_eq!(st, SparsifyStatus::Ok);
        assert_eq!(edges.len, 2);
        let flat = std::slice::from_raw_parts(edges.nodes, edges.len * 2);
        assert_eq!(flat, &[0, 1, 1, 2]);

        let mut max_err = u32::MAX;
        let mut violations = usize::MAX;
        let st = sparsify_verify(
            g,
            edges.nodes,
            edges.len,
            pairs.as_ptr(),
            1,
            0.0,
            &mut max_err,
            &mut violations,
        );
        assert_eq!(st, SparsifyStatus::Ok);
        assert_eq!(max_err, 0);
        assert_eq!(violations, 0);

        sparsify_edges_free(&mut edges);
        assert!(edges.nodes.is_null());
        sparsify_graph_free(g);
    }
}

#[test]
fn spanners_produce_subgraphs() {
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(
            sparsify_graph_random(60, 180, 7, &mut g),
            SparsifyStatus::Ok
        );
        let subset = [0u32, 5, 10, 20];
        let mut edges = SparsifyEdges {
            nodes: ptr::null_mut(),
            len: 0,
            capacity: 0,
        };
        let st = sparsify_subset_spanner(g, subset.as_ptr(), subset.len(), 0.3, &mut edges);
        assert_eq!(st, SparsifyStatus::Ok);
        assert!(edges.len > 0 && edges.len <= 180);
        sparsify_edges_free(&mut edges);

        let st = sparsify_standard_spanner(g, 0.3, 2.0 / 3.0, 2.0 / 3.0, 1, &mut edges);
        assert_eq!(st, SparsifyStatus::Ok);
        assert!(edges.len > 0);
        sparsify_edges_free(&mut edges);
        sparsify_graph_free(g);
    }
}

#[test]
fn generated_header_exists() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("include")
        .join("sparsify.h");
    let text = std::fs::read_to_string(header).unwrap();
    assert!(text.contains("sparsify_graph_parse"));
    assert!(text.contains("SparsifyStatus"));
}
