"""
Instance and result file storage.

Documents are pydantic models written as UTF-8 JSON with indent 2, so the
same document always produces the same bytes.
"""

from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence, TypeVar, Union

from pydantic import BaseModel, ValidationError

from ..exceptions import InstanceFormatError, ResultMismatchError
from ..models.files import AgentEntry, InstanceFile, InstanceMeta, ResultFile, RoundCounts, TieBreakConfig
from ..models.instance import Allocation, Instance
from ..models.report import VerifyReport
from ..utils.logger import get_logger

logger = get_logger(__name__)

PathLike = Union[str, Path]
Document = TypeVar("Document", bound=BaseModel)


def _load(path: PathLike, model: type[Document]) -> Document:
    """Read and validate a JSON document."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InstanceFormatError(f"Cannot read {path}: {e}") from e
    try:
        doc = model.model_validate_json(text)
    except ValidationError as e:
        raise InstanceFormatError(f"Invalid {model.__name__} in {path}: {e}") from e
    logger.debug(f"Loaded {model.__name__} from {path}")
    return doc


def _save(doc: BaseModel, path: PathLike) -> None:
    """Write a document as JSON, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        path.write_text(doc.model_dump_json(indent=2) + "\n", encoding="utf-8")
        logger.debug(f"Saved {type(doc).__name__} to {path}")
    except OSError as e:
        logger.error(f"Failed to save {path}: {e}")
        raise


def load_instance_file(path: PathLike) -> InstanceFile:
    """
    Load an instance document.

    Raises:
        InstanceFormatError: Unreadable file or schema violation
    """
    return _load(path, InstanceFile)


def save_instance_file(doc: InstanceFile, path: PathLike) -> None:
    _save(doc, path)
    logger.info(f"Wrote instance with {len(doc.agents)} agents and {len(doc.goods)} goods to {path}")


def load_result_file(path: PathLike) -> ResultFile:
    """
    Load a result document.

    Raises:
        InstanceFormatError: Unreadable file or schema violation
    """
    return _load(path, ResultFile)


def save_result_file(doc: ResultFile, path: PathLike) -> None:
    _save(doc, path)
    logger.info(f"Wrote {doc.mode.criterion} result to {path}")


def instance_to_file(inst: Instance, k: Optional[Fraction] = None) -> InstanceFile:
    """
    Document for a canonical instance.

    Values are written back in raw units (canonical value times low) and
    weights in their normalized form.
    """
    return InstanceFile(
        agents=[
            AgentEntry(
                id=label,
                weight=inst.weights[i],
                values=[value * inst.low for value in inst.values[i]],
            )
            for i, label in enumerate(inst.agent_labels)
        ],
        goods=list(inst.good_labels),
        meta=InstanceMeta(k=k if k is not None else inst.k),
    )


def result_to_file(
    inst: Instance,
    result,
    certificates: VerifyReport,
    include_trace: bool = False,
    owner_override: Optional[Sequence[int]] = None,
) -> ResultFile:
    """
    Document for a solve result.

    Args:
        inst: Canonical instance
        result: SolveResult from ``services.reallocation.solve``
        certificates: Verification report to embed
        include_trace: Embed the full round trace
        owner_override: Initial owners used, echoed in the tie-break block
    """
    state = result.state
    labels, goods = inst.agent_labels, inst.good_labels
    return ResultFile(
        mode=result.trace.mode,
        agents=list(labels),
        goods=list(goods),
        allocation={labels[i]: [goods[e] for e in sorted(state.bundles[i])] for i in inst.agents()},
        prices={goods[e]: state.prices[e] for e in inst.goods()},
        groups=[[labels[i] for i in members] for members in result.groups.groups],
        terminated_at=result.terminated_at,
        rounds=RoundCounts(init=result.init_round_count, realloc=result.realloc_round_count),
        certificates=certificates,
        tie_break=TieBreakConfig(
            initial_owners=[labels[i] for i in owner_override] if owner_override is not None else None
        ),
        trace=result.trace if include_trace else None,
    )


def allocation_from_result(inst: Instance, doc: ResultFile) -> tuple[Allocation, tuple[Fraction, ...]]:
    """
    Rebuild (allocation, prices) from a result document.

    Raises:
        ResultMismatchError: If agent or good ids do not match the instance, or
            the bundles do not partition the goods
    """
    if tuple(doc.agents) != inst.agent_labels:
        raise ResultMismatchError(f"result agents {doc.agents} do not match instance {list(inst.agent_labels)}")
    if tuple(doc.goods) != inst.good_labels:
        raise ResultMismatchError("result goods do not match the instance")

    agent_index = {label: i for i, label in enumerate(inst.agent_labels)}
    good_index = {label: e for e, label in enumerate(inst.good_labels)}
    bundles: list[list[int]] = [[] for _ in inst.agents()]
    for agent, held in doc.allocation.items():
        if agent not in agent_index:
            raise ResultMismatchError(f"unknown agent {agent} in allocation")
        for good in held:
            if good not in good_index:
                raise ResultMismatchError(f"unknown good {good} in allocation")
            bundles[agent_index[agent]].append(good_index[good])
    try:
        X = Allocation.from_bundles(bundles, inst.m)
    except ValueError as e:
        raise ResultMismatchError(str(e)) from e

    if set(doc.prices) != set(inst.good_labels):
        raise ResultMismatchError("result prices do not cover exactly the instance goods")
    prices = tuple(doc.prices[label] for label in inst.good_labels)
    return X, prices
