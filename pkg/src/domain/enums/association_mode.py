from enum import Enum


class AssociationMode(str, Enum):
    GNN = "gnn"
    JPDA = "jpda"
