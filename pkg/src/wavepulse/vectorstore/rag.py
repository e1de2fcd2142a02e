"""Retrieval-augmented question answering over summary embeddings."""

from __future__ import annotations

from typing import Callable, Protocol

import numpy as np

from ..clients.prompts import RAG_PROMPT_TEMPLATE, RAG_SOURCE_HEADER
from .index import MetadataFilter, SearchHit, VectorIndex

NO_MATCH_ANSWER = "no matching content"


class Embedder(Protocol):
    def embed(self, text: str) -> np.ndarray: ...


class Generator(Protocol):
    def generate(self, prompt: str) -> str: ...


class RagEngine:
    """Embeds a question, retrieves top summaries, and asks the generator.

    ``summary_lookup`` maps a record id to its summary text (the index keeps
    only vectors and provenance metadata).
    """

    def __init__(
        self,
        index: VectorIndex,
        embedder: Embedder,
        generator: Generator,
        summary_lookup: Callable[[str], str],
    ):
        self.index = index
        self.embedder = embedder
        self.generator = generator
        self.summary_lookup = summary_lookup

    def answer_query(
        self, question: str, k: int = 8, flt: MetadataFilter = None
    ) -> dict:
        if not question.strip():
            raise ValueError("question must be non-empty")
        if len(self.index) == 0:
            return {"answer": NO_MATCH_ANSWER, "sources": []}
        hits = self.index.knn_search(self.embedder.embed(question), k=k, flt=flt)
        if not hits:
            return {"answer": NO_MATCH_ANSWER, "sources": []}
        prompt = self.build_prompt(question, hits)
        return {"answer": self.generator.generate(prompt), "sources": hits}

    def build_prompt(self, question: str, hits: list[SearchHit]) -> str:
        blocks = []
        for rank, hit in enumerate(hits, start=1):
            header = RAG_SOURCE_HEADER.format(
                rank=rank,
                call_sign=hit.metadata.get("call_sign", "?"),
                state=hit.metadata.get("state", "?"),
                date=hit.metadata.get("date", "?"),
                time=hit.metadata.get("time", "?"),
            )
            blocks.append(f"{header}\n{self.summary_lookup(hit.id)}")
        return RAG_PROMPT_TEMPLATE.format(sources="\n\n".join(blocks), question=question)
