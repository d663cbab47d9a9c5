"""HTTP layer over the assistant store and the trained models.

All responses are JSON; errors use {"error": <code>, "detail": <text>}
with conventional status codes. Handlers are synchronous so they run in
the framework's thread pool and the store's per-project locks apply.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from . import errors as E
from .assistant import AssistantStore
from .corpus import CodeDocument
from .taxonomy import builtin_taxonomy, normalize_components

_STATUS = {
    E.UnknownProject: 404,
    E.UnknownRecommendation: 404,
    E.UnknownQuestion: 404,
    E.UnknownId: 404,
    E.AlreadyDecided: 409,
    E.AlreadyAnswered: 409,
    E.ModelsMissing: 503,
}


class CreateProjectBody(BaseModel):
    documents: list[dict] = Field(default_factory=list)
    components: list[str] = Field(default_factory=list)
    level: str = "L1"
    attributes: dict[str, str] = Field(default_factory=dict)
    dialect: str = "arduino"
    project_id: str | None = None


class DecisionBody(BaseModel):
    decision: str


class AnswerBody(BaseModel):
    value: str


class ClassifyBody(BaseModel):
    tokens: list[str] | None = None
    document: dict | None = None
    dialect: str = "arduino"


class SearchBody(BaseModel):
    tokens: list[str] | None = None
    document: dict | None = None
    dialect: str = "arduino"
    k: int = 3


class HardwareBody(BaseModel):
    present: list[str]
    level: str = "L1"
    k: int = 3


def create_app(store: AssistantStore, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="aeskit assistant", version="0.1.0")

    @app.exception_handler(E.AeskitError)
    def _aeskit_error(request: Request, exc: E.AeskitError):
        status = _STATUS.get(type(exc), 400)
        return JSONResponse(
            status_code=status,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.exception_handler(ValueError)
    def _value_error(request: Request, exc: ValueError):
        return JSONResponse(
            status_code=400,
            content={"error": "ValueError", "detail": str(exc)},
        )

    def _tokens_from(body) -> list[str]:
        if body.tokens is not None:
            return [t.lower() for t in body.tokens]
        if body.document is not None:
            doc = CodeDocument.from_record(body.document, body.dialect)
            if store.models is None:
                raise E.ModelsMissing("no models loaded")
            return store.models.tokens_of(doc)
        raise ValueError("provide 'tokens' or 'document'")

    # -- assistant loop ------------------------------------------------------

    @app.post("/projects")
    def create_project(body: CreateProjectBody):
        state = store.create_project(
            body.documents,
            components=body.components,
            level=body.level,
            attributes=body.attributes,
            project_id=body.project_id,
            dialect=body.dialect,
            analyze=store.models is not None,
        )
        return {"project_id": state.project_id, "revision": state.revision}

    @app.get("/projects/{project_id}")
    def get_project(project_id: str):
        return store._state(project_id).to_json()

    @app.post("/projects/{project_id}/analyze")
    def analyze(project_id: str):
        recs, questions = store.analyze(project_id)
        return {
            "recommendations": [r.to_json() for r in recs],
            "questions": [q.to_json() for q in questions],
            "revision": store._state(project_id).revision,
        }

    @app.get("/projects/{project_id}/recommendations")
    def list_recommendations(project_id: str, status: str | None = None):
        store._state(project_id)
        recs = store.recommendations[project_id].values()
        if status is not None:
            recs = [r for r in recs if r.status == status]
        return {"recommendations": [r.to_json() for r in recs]}

    @app.post("/projects/{project_id}/recommendations/{rec_id}")
    def decide(project_id: str, rec_id: str, body: DecisionBody):
        state = store.decide(project_id, rec_id, body.decision)
        return {
            "recommendation": store.recommendations[project_id][rec_id].to_json(),
            "project": state.to_json(),
        }

    @app.get("/projects/{project_id}/questions")
    def list_questions(project_id: str, status: str | None = None):
        store._state(project_id)
        questions = store.questions[project_id].values()
        if status is not None:
            questions = [q for q in questions if q.status == status]
        return {"questions": [q.to_json() for q in questions]}

    @app.post("/projects/{project_id}/questions/{question_id}")
    def answer(project_id: str, question_id: str, body: AnswerBody):
        state = store.answer(project_id, question_id, body.value)
        return {
            "question": store.questions[project_id][question_id].to_json(),
            "project": state.to_json(),
        }

    # -- direct model endpoints ----------------------------------------------

    @app.post("/classify")
    def classify(body: ClassifyBody):
        if store.models is None or store.models.classifier is None:
            raise E.ModelsMissing("no classifier loaded")
        label, probs = store.models.classify_tokens(_tokens_from(body))
        return {"label": label, "probabilities": probs}

    @app.post("/search")
    def search(body: SearchBody):
        if store.models is None or store.models.index is None:
            raise E.ModelsMissing("no search index loaded")
        neighbors = store.models.neighbors_for_tokens(_tokens_from(body), body.k)
        return {"neighbors": [{"id": n.id, "score": n.score} for n in neighbors]}

    @app.post("/hardware/complete")
    def hardware_complete(body: HardwareBody):
        if store.models is None or not store.models.has_hw_model:
            raise E.ModelsMissing("no hardware model loaded")
        tax = builtin_taxonomy(body.level)
        partial, unmapped = normalize_components(body.present, tax)
        scores = store.models.hw_scores(partial)
        from .hwrec import recommend_top_k

        ranked = recommend_top_k(scores, body.k)
        return {
            "components": [
                {"category": tax.categories[slot], "score": score}
                for slot, score in ranked
            ],
            "unmapped": unmapped,
        }

    @app.get("/knowledge")
    def knowledge(s: str = "", p: str = "", o: str = ""):
        triples = store.knowledge_query(s or None, p or None, o or None)
        return {"triples": [list(t) for t in triples]}

    @app.get("/healthz")
    def healthz():
        return {
            "status": "ok",
            "models_loaded": store.models is not None,
            "projects": len(store.projects),
        }

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
