mod common;

use std::fs;

use common::{bilink, stderr, stdout, write_example};

#[test]
fn build_reports_example_stream_counts() {
    let dir = tempfile::tempdir().unwrap();
    write_example(dir.path());
    let o = bilink(dir.path(), &["build", "--packets", "packets.csv", "--partition", "partition.txt", "-o", "run"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("top nodes: 2") && out.contains("bottom nodes: 2"), "{out}");
    assert!(out.contains("links: 6 over 4 pairs"), "{out}");
    let stats = fs::read_to_string(dir.path().join("run/stats.csv")).unwrap();
    assert!(stats.contains("links,6\n") && stats.contains("packets,21\n"), "{stats}");
    assert!(dir.path().join("run/stream.json").is_file());
}

#[test]
fn same_side_packet_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    write_example(dir.path());
    fs::write(dir.path().join("bad.csv"), "0.5,u,a\n1.0,u,v\n").unwrap();
    let args = ["build", "--packets", "bad.csv", "--partition", "partition.txt", "-o", "run"];
    let o = bilink(dir.path(), &args);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("bad.csv") && err.contains("both endpoints on the top side"), "{err}");

    let o = bilink(dir.path(), &[&args[..], &["--lenient"]].concat());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("dropped same-side packets: 1"));
}

#[test]
fn malformed_row_reports_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    write_example(dir.path());
    fs::write(dir.path().join("bad.csv"), "timestamp,src,dst\n0.5,u,a\nsoon,u,b\n").unwrap();
    let o = bilink(dir.path(), &["build", "--packets", "bad.csv", "--partition", "partition.txt", "-o", "run"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.csv:3"), "{}", stderr(&o));
}

#[test]
fn pruning_a_star_leaves_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let mut packets = String::new();
    for i in 0..5 {
        packets.push_str(&format!("{},hub,leaf{i}\n", i + 1));
    }
    fs::write(dir.path().join("star.csv"), packets).unwrap();
    fs::write(dir.path().join("sides.txt"), "hub,top\ndefault,bottom\n").unwrap();
    let o = bilink(
        dir.path(),
        &["build", "--packets", "star.csv", "--partition", "sides.txt", "--prune", "-o", "run"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("links: 0 over 0 pairs") && out.contains("pruned: 6 nodes, 5 links"), "{out}");
}

fn built(dir: &std::path::Path) {
    write_example(dir);
    let o = bilink(dir, &["build", "--packets", "packets.csv", "--partition", "partition.txt", "-o", "run"]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn sampling_twice_adds_nothing() {
    let dir = tempfile::tempdir().unwrap();
    built(dir.path());
    let args = ["sample", "-o", "run", "--trajectories", "1000", "--seed", "7"];
    assert!(bilink(dir.path(), &args).status.success());
    let lines = fs::read_to_string(dir.path().join("run/cliques.txt")).unwrap();
    let counts = fs::read_to_string(dir.path().join("run/cliques.counts")).unwrap();
    assert!(lines.lines().any(|l| l == "3.000000,5.000000,u|v,a|b"), "{lines}");
    assert!(lines.lines().any(|l| l == "8.000000,10.000000,u|v,a"), "{lines}");

    let o = bilink(dir.path(), &args);
    assert!(stdout(&o).contains("new distinct cliques: 0"), "{}", stdout(&o));
    assert_eq!(fs::read_to_string(dir.path().join("run/cliques.txt")).unwrap(), lines);
    assert_eq!(fs::read_to_string(dir.path().join("run/cliques.counts")).unwrap(), counts);

    // a further range extends the store but keeps it sorted and deduplicated
    let o = bilink(dir.path(), &[&args[..], &["--start-index", "1000"]].concat());
    assert!(o.status.success());
    let more = fs::read_to_string(dir.path().join("run/cliques.txt")).unwrap();
    assert!(more.lines().count() >= lines.lines().count());
    assert!(fs::read_to_string(dir.path().join("run/cliques.counts")).unwrap().contains("0-2000"));
}

#[test]
fn worker_count_does_not_change_the_store() {
    let dir = tempfile::tempdir().unwrap();
    built(dir.path());
    fs::create_dir(dir.path().join("other")).unwrap();
    fs::copy(dir.path().join("run/stream.json"), dir.path().join("other/stream.json")).unwrap();
    let base = ["sample", "--trajectories", "500", "--seed", "3", "--checkpoint-every", "77"];
    assert!(bilink(dir.path(), &[&base[..], &["-o", "run", "-w", "1"]].concat()).status.success());
    assert!(bilink(dir.path(), &[&base[..], &["-o", "other", "-w", "4"]].concat()).status.success());
    for f in ["cliques.txt", "cliques.counts"] {
        assert_eq!(
            fs::read(dir.path().join("run").join(f)).unwrap(),
            fs::read(dir.path().join("other").join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn corrupt_store_is_left_alone() {
    let dir = tempfile::tempdir().unwrap();
    built(dir.path());
    let args = ["sample", "-o", "run", "--trajectories", "100"];
    assert!(bilink(dir.path(), &args).status.success());
    let path = dir.path().join("run/cliques.txt");
    let mut text = fs::read_to_string(&path).unwrap();
    text.push_str("not a clique\n");
    fs::write(&path, &text).unwrap();
    let o = bilink(dir.path(), &["sample", "-o", "run", "--trajectories", "200"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("corrupt") && stderr(&o).contains("rebuild"), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(&path).unwrap(), text);

    fs::remove_file(dir.path().join("run/cliques.counts")).unwrap();
    fs::write(&path, "").unwrap();
    assert_eq!(bilink(dir.path(), &args).status.code(), Some(2));
}

#[test]
fn analyses_write_tables() {
    let dir = tempfile::tempdir().unwrap();
    built(dir.path());
    fs::write(dir.path().join("labels.txt"), "b\n").unwrap();
    assert!(bilink(dir.path(), &["sample", "-o", "run", "--trajectories", "300"]).status.success());

    let o = bilink(dir.path(), &["analyze", "summary", "-o", "run"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("labels required"));

    for (which, file, header) in [
        ("sizes", "sizes.csv", "size,count,fraction"),
        ("ccdf", "ccdf.csv", "duration,count_above,fraction_above"),
        ("ccdf-by-size", "ccdf_by_size.csv", "size,duration,count_above,fraction_above"),
        ("timespan", "timespan.csv", "rank,begin,end,size"),
        ("activity", "activity.csv", "second,nodes_active"),
        ("summary", "summary.csv", "key,value"),
    ] {
        let o = bilink(dir.path(), &["analyze", which, "-o", "run", "--labels", "labels.txt"]);
        assert!(o.status.success(), "{which}: {}", stderr(&o));
        let text = fs::read_to_string(dir.path().join("run/analysis").join(file)).unwrap();
        assert!(text.starts_with(header), "{which}: {text}");
    }

    let o = bilink(dir.path(), &["analyze", "induced", "-o", "run", "--window", "3:4", "--labels", "labels.txt"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("component 0: 4 nodes (1 flagged, 3 unflagged)"), "{}", stdout(&o));
    let edges = fs::read_to_string(dir.path().join("run/analysis/induced_edges.csv")).unwrap();
    assert_eq!(edges, "src,dst\nu,a\nu,b\nv,a\nv,b\n");
    assert!(fs::read_to_string(dir.path().join("run/analysis/induced.graphml")).unwrap().contains("<graphml"));

    let o = bilink(dir.path(), &["analyze", "induced", "-o", "run"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn config_file_drives_pipeline_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    write_example(dir.path());
    fs::write(
        dir.path().join("run.toml"),
        "packets = \"packets.csv\"\npartition = \"partition.txt\"\nout = \"run\"\ntimespan = \"0:5\"\ntrajectories = 50\nseed = 1\n",
    )
    .unwrap();
    let o = bilink(dir.path(), &["build", "--config", "run.toml"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("timespan: [0.000000, 5.000000]"));
    let o = bilink(dir.path(), &["build", "--config", "run.toml", "--timespan", "0:10"]);
    assert!(stdout(&o).contains("timespan: [0.000000, 10.000000]"));

    let o = bilink(dir.path(), &["sample", "--config", "run.toml", "--trajectories", "70"]);
    assert!(stdout(&o).contains("trajectories run: 70"), "{}", stdout(&o));
    let counts = fs::read_to_string(dir.path().join("run/cliques.counts")).unwrap();
    assert!(counts.contains("seed=1,"), "{counts}");
}

#[test]
fn usage_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["frobnicate"][..],
        &["sample", "-o", "run", "--trajectories", "5"],
        &["sample", "-o", "run"],
        &["build", "-o", "run", "--packets", "missing.csv", "--partition", "missing.txt"],
        &["sample", "-o", "run", "--trajectories", "5", "--workers", "0"],
        &["sample", "-o", "run", "--trajectories", "5", "--seconds", "1"],
    ] {
        let o = bilink(dir.path(), args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
    }
    assert_eq!(bilink(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn synth_feeds_build() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("sc.txt"),
        "timespan = 0 100\nnoise_rate = 2\nnoise_top = 20\nnoise_bottom = 30\nclique = 3 3 20 50 0.9\nscan = 2 10 70 71\n",
    )
    .unwrap();
    let o = bilink(dir.path(), &["synth", "--scenario", "sc.txt", "--seed", "4", "-o", "syn"]);
    assert!(o.status.success(), "{}", stderr(&o));
    for f in ["packets.csv", "partition.txt", "labels.txt", "truth.csv"] {
        assert!(dir.path().join("syn").join(f).is_file(), "{f}");
    }
    let again = tempfile::tempdir().unwrap();
    fs::copy(dir.path().join("sc.txt"), again.path().join("sc.txt")).unwrap();
    bilink(again.path(), &["synth", "--scenario", "sc.txt", "--seed", "4", "-o", "syn"]);
    assert_eq!(
        fs::read(dir.path().join("syn/packets.csv")).unwrap(),
        fs::read(again.path().join("syn/packets.csv")).unwrap()
    );
    let o = bilink(
        dir.path(),
        &["build", "--packets", "syn/packets.csv", "--partition", "syn/partition.txt", "-o", "syn"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
}
