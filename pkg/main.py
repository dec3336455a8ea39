import sys

import hydra


@hydra.main(config_path="config", config_name="main")
def main(cfg):
    from run import run

    sys.exit(run(cfg))


if __name__ == "__main__":
    main()
