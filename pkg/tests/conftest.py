from __future__ import annotations

import sys
from pathlib import Path
from typing import Any, Dict, List, Tuple

import pytest

ROOT = Path(__file__).resolve().parents[1]
src_path = ROOT / "src"
if str(src_path) not in sys.path:
    sys.path.insert(0, str(src_path))

from plan_x.compiler import compile_problem  # noqa: E402
from plan_x.config import asset_path  # noqa: E402
from plan_x.intent.task_dict import TaskDictionary, validate_task_dictionary  # noqa: E402
from plan_x.io.json_io import read_json, write_json  # noqa: E402
from plan_x.pddl.model import Domain, Problem  # noqa: E402
from plan_x.pddl.reader import parse_domain  # noqa: E402
from plan_x.planner.grounding import GroundedTask, ground  # noqa: E402


TRADE_REQUEST = "What is the status of the trade TR123?"
BARCHART_REQUEST = (
    'Read "annual-report.csv" and generate a barchart from "balance" against reference column '
    '"year". Create a slide with bar chart with title "Balance over years", and add it to a '
    "presentation. Save the presentation on file genplanx/graph.pptx."
)
TWO_DATABASES_REQUEST = (
    "Read data and generate a barchart from 'balance' against reference column 'year'. The "
    "available databases to read from are db1 with cost of reading 1 and db2 with cost of "
    "reading 2. db1 supports basic query. db2 supports optimized query. Create a slide with bar "
    "chart with title 'Balance over years', and add it to a presentation. Save the presentation "
    "on file genplanx/graph.pptx."
)
LEARNING_REQUEST = (
    "Read ./genplanx/investment_data.csv and ./genplanx/investment_pred.csv. The available "
    "database for both files is db with cost of reading, 1. Learn the WillPurchase column with "
    "the DecisionTreeClassifier algorithm. The name of the model is investor. Use the trained "
    "model to predict the WillPurchase column for the data in the file "
    "./genplanx/investment_pred.csv"
)
SAVE_APPOINTMENTS_REQUEST = "Read my appointments and save the result in apps.csv."
COUNT_APPOINTMENTS_REQUEST = (
    "Open 'apps.csv' and filter the appointments in 2024. Of these appointments count how many "
    "are at an hour between 8 and 11 and the number of recurring appointments (isrecurring)."
)
PIE_REQUEST = (
    "Read genplanx/quarterly-sales.csv and generate a pie-chart from 'sales' against reference "
    "column 'quarter'. Create a slide with the pie-chart with the title Quarterly Sales "
    "Distribution, and add it to a presentation. Save the presentation on file genplanx/graph.pptx"
)
EXPLAIN_REQUEST = "Explain what a repo rate is."
UNSOLVABLE_REQUEST = "Reply to the email from the auditors."
GIBBERISH_REQUEST = "Blorp the zxqv until it wibbles."

HELD_OUT_INCOMES = [25000, 33000, 41000, 47500, 52000, 61000, 70500, 83000, 91000, 99500]
PURCHASE_THRESHOLD = 59000

# 2024 rows with hour 8..11: standup, review, dentist. Recurring 2024 rows: standup, planning.
APPOINTMENTS: List[Dict[str, Any]] = [
    {"subject": "standup", "start": "2024-01-08T09:00:00", "hour": 9, "year": 2024, "isrecurring": True},
    {"subject": "review", "start": "2024-02-12T10:00:00", "hour": 10, "year": 2024, "isrecurring": False},
    {"subject": "lunch", "start": "2024-03-05T12:00:00", "hour": 12, "year": 2024, "isrecurring": False},
    {"subject": "dentist", "start": "2024-04-17T08:00:00", "hour": 8, "year": 2024, "isrecurring": False},
    {"subject": "planning", "start": "2024-05-20T14:00:00", "hour": 14, "year": 2024, "isrecurring": True},
    {"subject": "retro", "start": "2024-06-03T16:00:00", "hour": 16, "year": 2024, "isrecurring": False},
    {"subject": "kickoff", "start": "2023-11-06T09:00:00", "hour": 9, "year": 2023, "isrecurring": True},
    {"subject": "audit", "start": "2023-12-11T10:00:00", "hour": 10, "year": 2023, "isrecurring": False},
    {"subject": "offsite", "start": "2025-01-13T11:00:00", "hour": 11, "year": 2025, "isrecurring": True},
    {"subject": "one-to-one", "start": "2024-07-01T18:00:00", "hour": 18, "year": 2024, "isrecurring": False},
]
APPOINTMENTS_IN_MORNING_2024 = 3
RECURRING_2024 = 2


def scripted_task(request: str) -> Dict[str, Any]:
    """The task dictionary the shipped scripted backend answers ``request`` with."""
    return read_json(asset_path("scripted_replies.json"))[request]


def compiled(request: str, domain: Domain) -> Tuple[TaskDictionary, Problem, GroundedTask]:
    task = validate_task_dictionary(scripted_task(request), domain)
    problem = compile_problem(task, domain, "request")
    return task, problem, ground(domain, problem)


def write_annual_report(root: Path) -> Path:
    path = root / "annual-report.csv"
    path.write_text(
        "year,balance\n2020,120\n2021,135\n2022,150\n2023,90\n2024,170\n", encoding="utf-8"
    )
    return path


def write_trades(root: Path) -> Path:
    path = root / "genplanx" / "file_1.csv"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        "trade-id,client,status\nTR100,CIDTA12,settled\nTR123,CIDTA12,pending\nTR150,CIDQ7,failed\n",
        encoding="utf-8",
    )
    return path


def write_investments(root: Path) -> None:
    folder = root / "genplanx"
    folder.mkdir(parents=True, exist_ok=True)
    lines = ["Income,Age,WillPurchase"]
    for i in range(40):
        income = 20000 + 2000 * i
        age = 20 + (i * 7) % 45
        lines.append(f"{income},{age},{income > PURCHASE_THRESHOLD}")
    (folder / "investment_data.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    held_out = ["Income,Age"]
    for i, income in enumerate(HELD_OUT_INCOMES):
        held_out.append(f"{income},{25 + 3 * i}")
    (folder / "investment_pred.csv").write_text("\n".join(held_out) + "\n", encoding="utf-8")


def write_appointments(root: Path) -> None:
    write_json(root / "appointments.json", APPOINTMENTS)


def write_quarterly_sales(root: Path) -> None:
    path = root / "genplanx" / "quarterly-sales.csv"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("quarter,sales\nQ1,40\nQ2,55\nQ3,35\nQ4,70\n", encoding="utf-8")


@pytest.fixture(scope="session")
def domain() -> Domain:
    path = asset_path("assistant.pddl")
    return parse_domain(path.read_text(encoding="utf-8"), str(path))


@pytest.fixture
def office(tmp_path: Path) -> Path:
    """World directory with every fixture table the shipped requests read."""
    root = tmp_path / "office"
    root.mkdir()
    write_annual_report(root)
    write_trades(root)
    write_investments(root)
    write_appointments(root)
    write_quarterly_sales(root)
    return root
