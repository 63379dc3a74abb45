import json
import random

import pytest

from multiref import kernels


@pytest.fixture(params=kernels.available_backends())
def kernel_backend(request):
    """Run the test once per available kernel backend."""
    previous = kernels.active_backend()
    kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(previous)


@pytest.fixture
def rng():
    return random.Random(20240805)


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")


@pytest.fixture
def jsonl_writer():
    return write_jsonl
