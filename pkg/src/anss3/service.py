"""Local HTTP service: one deduction session over the bundled fixture charts.

The session is a list of script lines.  POST /assert executes one line (chart
loads, assertions, propagate, claims all use the same grammar as script
files) and returns the newly derived facts; POST /undo pops the last line and
replays the rest from scratch, which is cheap because replay is
deterministic.  The session is persisted as script text after every
mutation, so any session file is itself a runnable proof script.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Callable, List, Optional

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel

from .deduce import FIXTURE_DIR, Contradiction, Engine, ScriptError


class AssertRequest(BaseModel):
    line: str


class LogEntryModel(BaseModel):
    fact: str
    rule: str
    premises: List[str]
    citation: str
    flags: List[str]


class ClaimModel(BaseModel):
    line: str
    proven: bool
    detail: str
    flags: List[str]


class AssertResponse(BaseModel):
    new_facts: List[LogEntryModel]
    claims: List[ClaimModel]


class ChartInfo(BaseModel):
    id: str
    target: str
    fixture: bool
    loaded: bool


def _entry_model(e) -> LogEntryModel:
    return LogEntryModel(
        fact=e.fact, rule=e.rule, premises=e.premises, citation=e.citation, flags=e.flags
    )


class Session:
    def __init__(
        self,
        session_file: Optional[Path] = None,
        chart_provider: Optional[Callable] = None,
        fixture_dir: Optional[Path] = None,
    ):
        self.session_file = Path(session_file) if session_file else None
        self.chart_provider = chart_provider
        self.fixture_dir = Path(fixture_dir) if fixture_dir else FIXTURE_DIR
        self.lines: List[str] = []
        self.engine = Engine(chart_provider=chart_provider, fixture_dir=self.fixture_dir)
        if self.session_file and self.session_file.exists():
            for line in self.session_file.read_text().splitlines():
                if line.strip():
                    self.lines.append(line)
                    self.engine.execute(line.strip(), len(self.lines))

    def _persist(self):
        if self.session_file:
            self.session_file.write_text("".join(l + "\n" for l in self.lines))

    def replay(self):
        engine = Engine(chart_provider=self.chart_provider, fixture_dir=self.fixture_dir)
        from .deduce import ScriptReport

        report = ScriptReport()
        for i, line in enumerate(self.lines, 1):
            engine.execute(line, i, report)
        self.engine = engine
        return report

    def apply(self, line: str):
        from .deduce import ScriptReport

        report = ScriptReport()
        snapshot = list(self.lines)
        try:
            entries = self.engine.execute(line.strip(), len(self.lines) + 1, report)
            self.lines.append(line.strip())
            # assertions propagate immediately so the caller sees consequences
            if line.strip().startswith("assert"):
                entries = entries + self.engine.execute(
                    "propagate", len(self.lines) + 1, report
                )
                self.lines.append("propagate")
        except (ScriptError, Contradiction):
            self.lines = snapshot
            self.replay()
            raise
        self._persist()
        return entries, report

    def undo(self):
        if not self.lines:
            raise IndexError("nothing to undo")
        last = self.lines.pop()
        # an assertion and its auto-inserted propagate undo as one action
        if last == "propagate" and self.lines and self.lines[-1].startswith("assert"):
            self.lines.pop()
        self.replay()
        self._persist()


def create_app(
    session_file: Optional[Path] = None,
    chart_provider: Optional[Callable] = None,
    fixture_dir: Optional[Path] = None,
) -> FastAPI:
    app = FastAPI(title="anss3", version="0.1.0")
    session = Session(session_file, chart_provider, fixture_dir)
    app.state.session = session

    fixtures = {}
    for path in sorted(session.fixture_dir.glob("*.json")):
        data = json.loads(path.read_text())
        fixtures[path.name] = data

    @app.get("/charts", response_model=List[ChartInfo])
    def charts():
        out = []
        for name, data in fixtures.items():
            out.append(
                ChartInfo(
                    id=name,
                    target=data.get("target", "?"),
                    fixture=True,
                    loaded=data.get("target") in session.engine.charts,
                )
            )
        return out

    @app.get("/chart/{chart_id}")
    def chart(chart_id: str):
        if chart_id not in fixtures:
            raise HTTPException(status_code=404, detail=f"no chart {chart_id}")
        return fixtures[chart_id]

    @app.post("/assert", response_model=AssertResponse)
    def do_assert(req: AssertRequest):
        try:
            entries, report = session.apply(req.line)
        except ScriptError as err:
            raise HTTPException(status_code=422, detail=str(err))
        except Contradiction as err:
            raise HTTPException(
                status_code=409,
                detail={
                    "message": str(err),
                    "survive_chain": [e.to_json() for e in err.survive_chain],
                    "die_chain": [e.to_json() for e in err.die_chain],
                },
            )
        return AssertResponse(
            new_facts=[_entry_model(e) for e in entries],
            claims=[
                ClaimModel(line=c.line, proven=c.proven, detail=c.detail, flags=c.flags)
                for c in report.claims
            ],
        )

    @app.post("/undo")
    def undo():
        try:
            session.undo()
        except IndexError:
            raise HTTPException(status_code=422, detail="nothing to undo")
        return {"lines": session.lines}

    @app.get("/log", response_class=PlainTextResponse)
    def log():
        return session.engine.log_json()

    @app.get("/session", response_class=PlainTextResponse)
    def session_text():
        return "".join(l + "\n" for l in session.lines)

    return app
