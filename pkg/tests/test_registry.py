import pytest

from adl_module.utils.registry import _REGISTRY, register_category


@pytest.fixture
def category():
    get_test, register_test = register_category("test")
    yield get_test, register_test
    del _REGISTRY["test"]


def test_register_and_get(category):
    get_test, register_test = category
    register_test("string", name="test_string")

    @register_test
    def test_func():
        return 0

    @register_test(name="renamed")
    class test_class:
        pass

    assert get_test("test_string") == "string"
    assert get_test("test_func")() == 0
    assert get_test("renamed") is test_class


def test_duplicates_are_rejected(category):
    _, register_test = category
    register_test(1, name="one")
    with pytest.raises(ValueError, match="already registered"):
        register_test(2, name="one")
    with pytest.raises(ValueError, match="in registry already"):
        register_category("test")


def test_unknown_item_lists_known(category):
    get_test, register_test = category
    register_test(1, name="b")
    register_test(2, name="a")
    with pytest.raises(ValueError, match=r"known: a, b"):
        get_test("c")
