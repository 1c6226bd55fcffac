from __future__ import annotations

from datetime import datetime
from typing import Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, model_validator


class WebDescription(BaseModel):
	"""Web-description file: documents with their triples, plus the adoc map"""

	model_config = ConfigDict(extra="forbid")

	documents: Dict[str, List[Tuple[str, str, str]]] = Field(default_factory=dict)
	adoc: Dict[str, str] = Field(default_factory=dict)


class RunConfig(BaseModel):
	model_config = ConfigDict(extra="forbid")

	web: str
	query: str
	semantics: Literal["full", "reach"] = "full"
	criterion: Optional[str] = None
	seeds: List[str] = Field(default_factory=list)
	budget: Union[PositiveInt, Literal["unlimited"], None] = None
	mode: Literal["batch", "stream"] = "batch"

	@model_validator(mode="after")
	def check_semantics(self) -> "RunConfig":
		if self.semantics == "reach":
			if not self.seeds:
				raise ValueError("--semantics reach requires at least one seed URI")
		else:
			if self.criterion is not None or self.seeds:
				raise ValueError("--semantics full does not take --criterion or --seeds")
			if self.budget == "unlimited":
				raise ValueError("an unlimited budget is only allowed with --semantics reach")
			if self.mode == "stream":
				raise ValueError("--mode stream requires --semantics reach")
		return self

	@property
	def max_lookups(self) -> Optional[int]:
		return self.budget if isinstance(self.budget, int) else None


class ExecutionSummary(BaseModel):
	status: Literal["Complete", "BudgetExhausted"]
	solutions: int
	lookups: int
	docs: int


class StoredWebOut(BaseModel):
	name: str
	documents: int
	triples: int
	created_at: datetime

	model_config = ConfigDict(from_attributes=True)
