use qmor::workspace::{parse_workspace, RunOptions, Status};

#[test]
fn shipped_workspaces_pass() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/workspaces");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let report = parse_workspace(&text).unwrap().run(&RunOptions::default()).unwrap();
        assert_eq!(report.status(), Status::Pass, "{}\n{}", path.display(), report.to_text());
        seen += 1;
    }
    assert!(seen >= 2);
}
