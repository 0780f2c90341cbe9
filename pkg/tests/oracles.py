"""Naive reference implementations the fast code paths are checked against."""


def naive_balanced_accuracy(scores, labels, threshold):
    """(TPR + TNR) / 2 with predict-consistent iff score >= threshold."""
    tp = fn = tn = fp = 0
    for score, label in zip(scores, labels):
        predicted_consistent = score >= threshold
        if label == "consistent":
            if predicted_consistent:
                tp += 1
            else:
                fn += 1
        else:
            if predicted_consistent:
                fp += 1
            else:
                tn += 1
    return (tp / (tp + fn) + tn / (tn + fp)) / 2


def naive_best_threshold(scores, labels):
    """Exhaustive scan over every distinct-score midpoint plus sentinels.

    Returns (threshold, balanced accuracy percent); ties keep the smallest
    threshold by scanning candidates in ascending order.
    """
    distinct = sorted(set(scores))
    candidates = [distinct[0] - 0.5]
    candidates += [(a + b) / 2.0 for a, b in zip(distinct, distinct[1:])]
    candidates += [distinct[-1] + 0.5]
    best_threshold = None
    best_accuracy = -1.0
    for candidate in candidates:
        accuracy = naive_balanced_accuracy(scores, labels, candidate)
        if accuracy > best_accuracy:
            best_threshold, best_accuracy = candidate, accuracy
    return best_threshold, best_accuracy * 100.0
