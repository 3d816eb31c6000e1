#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

/// Packets whose half-second windows produce the four-node example stream:
/// (u,a) = [1,6] u [8,10], (u,b) = [0,5], (v,a) = [2,5] u [7,10], (v,b) = [3,6].
pub fn example_packets() -> String {
    let mut rows: Vec<(f64, &str, &str)> = Vec::new();
    let mut add = |src, dst, ts: &[f64]| rows.extend(ts.iter().map(|&t| (t, src, dst)));
    add("u", "a", &[1.5, 2.5, 3.5, 4.5, 5.5, 8.5, 9.5]);
    add("b", "u", &[0.5, 1.5, 2.5, 3.5, 4.5]);
    add("v", "a", &[2.5, 3.5, 4.5, 7.5, 8.5, 9.5]);
    add("v", "b", &[3.5, 4.5, 5.5]);
    rows.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(y.1)));
    let mut out = String::from("timestamp,src,dst\n");
    for (t, s, d) in rows {
        out.push_str(&format!("{t},{s},{d}\n"));
    }
    out
}

pub const EXAMPLE_PARTITION: &str = "u,top\nv,top\na,bottom\nb,bottom\n";

pub fn write_example(dir: &Path) {
    std::fs::write(dir.join("packets.csv"), example_packets()).unwrap();
    std::fs::write(dir.join("partition.txt"), EXAMPLE_PARTITION).unwrap();
}

pub fn bilink(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bilink"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}
