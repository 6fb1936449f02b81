from pomp.report import gantt, schedule_rows, schedule_tsv


def test_rows_follow_the_shortest_linearization(fig5_plan):
    rows = schedule_rows(fig5_plan)
    assert max(r[0] for r in rows) == 3
    assert len(rows) == len(fig5_plan.actions())
    assert any(r[:3] == (2, "Agent3", "A4") for r in rows)


def test_tsv(fig5_plan):
    lines = schedule_tsv(fig5_plan).splitlines()
    assert lines[0].split("\t") == ["tick", "agent", "step", "action"]
    assert len(lines) == 1 + len(fig5_plan.actions())


def test_explicit_linearization(fig5_plan):
    lin = [{"Agent1": 1}, {"Agent1": 5, "Agent2": 2}, {"Agent2": 3}, {"Agent3": 4}, {"Agent2": 6}]
    assert [r[0] for r in schedule_rows(fig5_plan, lin)] == [1, 2, 2, 3, 4, 5]


def test_gantt_writes_png(fig5_plan, tmp_path):
    out = tmp_path / "g.png"
    gantt(fig5_plan, str(out), title="fig5")
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
