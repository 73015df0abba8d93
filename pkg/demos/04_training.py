"""Training a Siamese recurrent classifier on generated pairs.

Both sentences pass through one shared encoder; the two sentence vectors
feed a comparison layer and a softmax over the seven relations.  All
gradients are hand-derived and the optimizer is AdaDelta, so runs are
exactly reproducible from the seed.  Run:  python3 demos/04_training.py
"""

from folnli import SplitSpec, default_config, generate_dataset, restrict_config
from folnli import net

config = restrict_config(
    default_config(), ("Romans", "Italians", "Europeans"), ("love", "like")
)
data = generate_dataset(SplitSpec(2500, 500, seed=3, keep_independence=0.05), config)
print(f"training on {len(data.train)} pairs, evaluating on {len(data.test)}")


def report(row):
    if row.epoch % 5:
        return
    print(f"epoch {row.epoch:2d}  loss {row.loss:.4f}  "
          f"train {row.train_accuracy:5.1f}  test {row.test_accuracy:5.1f}")


result = net.train(
    "gru", data.train, data.test,
    epochs=50, batch_size=16, hidden=32, seed=0, on_epoch=report,
)

scored = net.evaluate(result.config, result.params, data.test)
print(f"\nfinal test accuracy {scored.accuracy:.1f}")
print("\nconfusion (rows = target, columns = prediction):")
print(net.confusion_table(scored))

# the summing baseline ignores word order entirely
baseline = net.train("sum", data.train, data.test, epochs=50, batch_size=16, seed=0)
print(f"order-blind summing baseline: test {baseline.final_test_accuracy:.1f}")
