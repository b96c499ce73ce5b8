from .classifier import KnnModel, knn_fit, knn_predict, knn_predict_many, knn_vote_fraction

__all__ = ['KnnModel', 'knn_fit', 'knn_predict', 'knn_predict_many', 'knn_vote_fraction']
