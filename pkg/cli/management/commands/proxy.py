from common.commands import SubGaussianCommand


class Command(SubGaussianCommand):
    help = "Print the closed-form optimal variance proxy of a truncated Gaussian or exponential as JSON."

    def add_arguments(self, parser):
        self.add_family_arguments(parser)

    def handle(self, *args, **options):
        distribution = self.distribution_from_options(options)
        self.progress("computing proxy for %s %s", distribution.family, distribution.params())
        self.write_json(distribution.as_dict())
