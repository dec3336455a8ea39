from abc import ABC, abstractmethod
from collections import Counter

from adl_module.errors import DispatchError
from adl_module.model.element import Element, Model, ShapeType

_DISPATCH = {
    ShapeType.PACKAGE: "visit_package",
    ShapeType.DIAGRAM: "visit_diagram",
    ShapeType.CLASS: "visit_node",
    ShapeType.OPERATION: "visit_member",
    ShapeType.ATTRIBUTE: "visit_member",
}


class ModelVisitor(ABC):
    """Callbacks chosen by an element's ``SHAPE_TYPE``.

    ``accept`` calls exactly one of them; recursing into children is up to
    the visitor.
    """

    @abstractmethod
    def visit_package(self, package: Element):
        pass

    @abstractmethod
    def visit_diagram(self, diagram: Element):
        pass

    @abstractmethod
    def visit_node(self, node: Element):
        pass

    @abstractmethod
    def visit_member(self, member: Element):
        pass


def accept(model: Model, element_id: str, visitor: ModelVisitor):
    element = model.element(element_id)
    try:
        method = _DISPATCH[element.shape]
    except KeyError:
        raise DispatchError(
            f"{element.shape} elements are not dispatched (read them through their owner)"
        ) from None
    return getattr(visitor, method)(element)


class ProjectVisitor(ModelVisitor):
    """Recursive traversal limited to project-owned elements.

    Packages visit their classes, then their sub-packages; diagrams delegate
    to their containing package; nodes visit their members in declaration
    order. Imported elements are skipped at every level.
    """

    def __init__(self, model: Model):
        self.model = model

    def visit(self, element: Element):
        return accept(self.model, element.id, self)

    def visit_package(self, package: Element):
        if not self.model.is_project_element(package.id):
            return None
        for child in package.children:
            if child.shape == ShapeType.CLASS and self.model.is_project_element(child.id):
                self.visit_node(child)
        for child in package.children:
            if child.shape == ShapeType.PACKAGE:
                self.visit_package(child)
        return None

    def visit_diagram(self, diagram: Element):
        package = self.model.containing_package(diagram.id)
        return self.visit_package(package) if package is not None else None

    def visit_node(self, node: Element):
        for member in self.model.members(node.id):
            if self.model.is_project_element(member.id):
                self.visit_member(member)
        return None

    def visit_member(self, member: Element):
        return None


class CountingVisitor(ProjectVisitor):
    """Tallies callbacks by name; handy for checking traversals."""

    def __init__(self, model: Model):
        super().__init__(model)
        self.counts = Counter()

    def visit_package(self, package):
        self.counts["visit_package"] += 1
        return super().visit_package(package)

    def visit_diagram(self, diagram):
        self.counts["visit_diagram"] += 1
        return super().visit_diagram(diagram)

    def visit_node(self, node):
        self.counts["visit_node"] += 1
        return super().visit_node(node)

    def visit_member(self, member):
        self.counts["visit_member"] += 1
        return super().visit_member(member)
