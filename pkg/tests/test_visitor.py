import pytest

from adl_module.adl.generator import load_diagram
from adl_module.errors import DispatchError
from adl_module.model.element import ShapeType
from adl_module.model.visitor import CountingVisitor, ProjectVisitor, accept


class NamesVisitor(ProjectVisitor):
    def __init__(self, model):
        super().__init__(model)
        self.seen = []

    def visit_node(self, node):
        self.seen.append(node.name)
        return super().visit_node(node)


def test_counts(mixed_model):
    visitor = CountingVisitor(mixed_model)
    for root in mixed_model.roots:
        visitor.visit(root)
    assert visitor.counts["visit_package"] == 2
    assert visitor.counts["visit_node"] == 4
    assert visitor.counts["visit_member"] == 10


def test_imported_classes_are_skipped(mixed_model):
    visitor = NamesVisitor(mixed_model)
    for root in mixed_model.roots:
        visitor.visit(root)
    assert visitor.seen == ["HandWritten", "Forwarded", "Track", "Event"]


def test_member_dispatch(mixed_model):
    event = mixed_model.find("Mixed::Event")
    operation = next(m for m in mixed_model.members(event.id) if m.name == "eventNumber")
    assert mixed_model.parameters(operation.id) == []
    pt = next(m for m in mixed_model.members(mixed_model.find("Mixed::Track").id) if m.name == "pt")
    assert accept(mixed_model, pt.id, CountingVisitor(mixed_model)) is None


def test_parameter_dispatch_error(hvd_model):
    param = next(e for e in hvd_model if e.shape == ShapeType.PARAMETER)
    with pytest.raises(DispatchError):
        accept(hvd_model, param.id, CountingVisitor(hvd_model))


def test_diagram_delegates_to_package(mixed_model, tmp_path):
    path = tmp_path / "tracks.diagram"
    path.write_text("# classes on the diagram\nMixed::Track\n")
    diagram = load_diagram(mixed_model, path)
    assert diagram.shape == ShapeType.DIAGRAM
    assert diagram.references == [mixed_model.find("Mixed::Track").id]

    visitor = NamesVisitor(mixed_model)
    visitor.visit(diagram)
    assert visitor.seen == ["HandWritten", "Forwarded", "Track", "Event"]
